//! Shared support for the integration suites: deterministic random formulas,
//! a naive scan-based propagator that manufactures hint lists, an independent
//! reference checker, a resolution-saturation refutation generator, and the
//! synthetic chain instance used by the performance tests.
//!
//! Everything here deliberately avoids the library's trail and database types
//! so that agreement between the two implementations means something.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use lratcheck::{
    Addition, Clause, ClauseId, CnfDocument, HintStructure, Literal, ProofLine, RatGroup,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn var(lit: i64) -> u64 {
    lit.unsigned_abs()
}

/// `Some(true)` iff `lit` is true under the partial assignment.
fn value(model: &HashMap<u64, bool>, lit: i64) -> Option<bool> {
    model.get(&var(lit)).map(|&positive| positive == (lit > 0))
}

/// Assigns so that `lit` becomes false.
fn falsify(model: &mut HashMap<u64, bool>, lit: i64) {
    model.insert(var(lit), lit < 0);
}

// ---------------------------------------------------------------------------
// Random formulas and candidate steps

/// A formula as plain data: id -> literals.
pub type RawFormula = BTreeMap<u64, Vec<i64>>;

pub fn random_clause(rng: &mut ChaCha8Rng, num_vars: u64, max_len: usize) -> Vec<i64> {
    let len = rng.random_range(1..=max_len.min(num_vars as usize));
    let mut vars: Vec<u64> = (1..=num_vars).collect();
    let (picked, _) = vars.partial_shuffle(rng, len);
    let mut lits: Vec<i64> = picked
        .iter()
        .map(|&v| if rng.random_bool(0.5) { v as i64 } else { -(v as i64) })
        .collect();
    lits.sort_unstable_by_key(|l| l.unsigned_abs());
    lits
}

pub fn random_formula(rng: &mut ChaCha8Rng, max_vars: u64, max_clauses: usize) -> RawFormula {
    let num_vars = rng.random_range(2..=max_vars);
    let num_clauses = rng.random_range(1..=max_clauses);
    (1..=num_clauses as u64)
        .map(|id| (id, random_clause(rng, num_vars, 3)))
        .collect()
}

/// A proof clause: possibly empty, pivot first, tail sorted by variable.
pub fn random_proof_clause(rng: &mut ChaCha8Rng, num_vars: u64) -> Vec<i64> {
    if rng.random_bool(0.05) {
        return Vec::new();
    }
    let mut lits = random_clause(rng, num_vars, 3);
    let pivot_at = rng.random_range(0..lits.len());
    lits.swap(0, pivot_at);
    lits[1..].sort_unstable_by_key(|l| l.unsigned_abs());
    lits
}

enum ClauseState {
    Satisfied,
    Falsified,
    Unit(i64),
    Unresolved,
}

fn clause_state(lits: &[i64], model: &HashMap<u64, bool>) -> ClauseState {
    let mut unit = None;
    let mut unassigned = 0;
    for &lit in lits {
        match value(model, lit) {
            Some(true) => return ClauseState::Satisfied,
            Some(false) => {}
            None => {
                unassigned += 1;
                unit = Some(lit);
            }
        }
    }
    match unassigned {
        0 => ClauseState::Falsified,
        1 => ClauseState::Unit(unit.unwrap()),
        _ => ClauseState::Unresolved,
    }
}

/// Scan-based unit propagation that records, in order, the ids of clauses
/// that became unit, appending the falsified clause last when a conflict is
/// reached. This is the "naive reference propagator" that manufactures hint
/// lists; the checker under test never scans like this.
pub fn naive_ucp(formula: &RawFormula, model: &mut HashMap<u64, bool>) -> (Vec<u64>, bool) {
    let mut hints = Vec::new();
    loop {
        let mut progress = false;
        for (&id, lits) in formula {
            match clause_state(lits, model) {
                ClauseState::Satisfied | ClauseState::Unresolved => {}
                ClauseState::Falsified => {
                    hints.push(id);
                    return (hints, true);
                }
                ClauseState::Unit(lit) => {
                    model.insert(var(lit), lit > 0);
                    hints.push(id);
                    progress = true;
                }
            }
        }
        if !progress {
            return (hints, false);
        }
    }
}

/// One candidate addition step over a raw formula.
#[derive(Clone, Debug)]
pub struct CandidateStep {
    pub clause: Vec<i64>,
    pub prefix: Vec<u64>,
    pub groups: Vec<(u64, Vec<u64>)>,
}

/// Generates hints for `clause` the way an elaborating checker would: full
/// UCP for the prefix and, failing a conflict, one group per clause
/// containing the negated pivot.
pub fn generate_step(formula: &RawFormula, clause: Vec<i64>) -> CandidateStep {
    let mut model = HashMap::new();
    for &lit in &clause {
        falsify(&mut model, lit);
    }
    let (prefix, conflict) = naive_ucp(formula, &mut model);
    if conflict || clause.is_empty() {
        return CandidateStep {
            clause,
            prefix,
            groups: Vec::new(),
        };
    }
    let neg_pivot = -clause[0];
    let mut groups = Vec::new();
    for (&id, lits) in formula {
        if !lits.contains(&neg_pivot) {
            continue;
        }
        let resolvent: Vec<i64> = lits.iter().copied().filter(|&l| l != neg_pivot).collect();
        if resolvent.iter().any(|&l| value(&model, l) == Some(true)) {
            groups.push((id, Vec::new()));
            continue;
        }
        let mut sub = model.clone();
        for &lit in &resolvent {
            if value(&sub, lit).is_none() {
                falsify(&mut sub, lit);
            }
        }
        let (units, _) = naive_ucp(formula, &mut sub);
        groups.push((id, units));
    }
    CandidateStep {
        clause,
        prefix,
        groups,
    }
}

/// Corrupts a step in a way that keeps group candidates duplicate-free and
/// sorted, so sequence and set comparisons of the candidate list coincide.
pub fn mutate_step(rng: &mut ChaCha8Rng, formula: &RawFormula, step: &mut CandidateStep) {
    for _ in 0..8 {
        match rng.random_range(0..5) {
            0 if !step.groups.is_empty() => {
                let at = rng.random_range(0..step.groups.len());
                step.groups.remove(at);
                return;
            }
            1 => {
                let with_units: Vec<usize> = step
                    .groups
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, units))| !units.is_empty())
                    .map(|(at, _)| at)
                    .collect();
                if let Some(&at) = with_units.as_slice().choose(rng) {
                    let units = &mut step.groups[at].1;
                    units.remove(rng.random_range(0..units.len()));
                    return;
                }
            }
            2 if !step.prefix.is_empty() => {
                let at = rng.random_range(0..step.prefix.len());
                step.prefix.remove(at);
                return;
            }
            3 if step.clause.len() >= 2 => {
                step.clause.swap(0, 1);
                return;
            }
            4 => {
                // A spurious candidate: an id whose clause lacks the negated
                // pivot, slotted in id order.
                if step.clause.is_empty() {
                    continue;
                }
                let neg_pivot = -step.clause[0];
                let candidates: Vec<u64> = formula
                    .iter()
                    .filter(|(_, lits)| !lits.contains(&neg_pivot))
                    .map(|(&id, _)| id)
                    .collect();
                if let Some(&id) = candidates.as_slice().choose(rng) {
                    let at = step.groups.partition_point(|&(g, _)| g < id);
                    step.groups.insert(at, (id, Vec::new()));
                    return;
                }
            }
            _ => {}
        }
    }
}

/// The shared random corpus: formulas of at most 10 variables and 40 clauses,
/// each paired with candidate addition steps, half of them corrupted.
/// Deterministic in the seed, so independent suites can re-derive it.
pub fn corpus(seed: u64, formulas: usize, steps_per: usize) -> Vec<(RawFormula, Vec<CandidateStep>)> {
    let mut rng = rng(seed);
    (0..formulas)
        .map(|_| {
            let formula = random_formula(&mut rng, 10, 40);
            let num_vars = formula
                .values()
                .flat_map(|lits| lits.iter().map(|&l| var(l)))
                .max()
                .unwrap_or(2);
            let steps = (0..steps_per)
                .map(|_| {
                    let clause = random_proof_clause(&mut rng, num_vars);
                    let mut step = generate_step(&formula, clause);
                    if rng.random_bool(0.5) {
                        mutate_step(&mut rng, &formula, &mut step);
                    }
                    step
                })
                .collect();
            (formula, steps)
        })
        .collect()
}

pub fn formula_to_doc(formula: &RawFormula) -> CnfDocument {
    let num_vars = formula
        .values()
        .flat_map(|lits| lits.iter().map(|&l| var(l)))
        .max()
        .unwrap_or(0);
    CnfDocument::new(
        num_vars,
        formula.values().map(|lits| Clause::from_ints(lits)).collect(),
    )
}

pub fn step_to_addition(id: u64, step: &CandidateStep) -> Addition {
    Addition {
        id: ClauseId::new(id),
        clause: Clause::from_ints(&step.clause),
        hints: HintStructure {
            prefix: step.prefix.iter().map(|&h| ClauseId::new(h)).collect(),
            groups: step
                .groups
                .iter()
                .map(|(candidate, units)| RatGroup {
                    candidate: ClauseId::new(*candidate),
                    units: units.iter().map(|&u| ClauseId::new(u)).collect(),
                })
                .collect(),
        },
    }
}

// ---------------------------------------------------------------------------
// Independent reference checker (strict semantics, set-based candidate scan)

fn ref_propagate(
    formula: &RawFormula,
    model: &mut HashMap<u64, bool>,
    hints: &[u64],
) -> Result<bool, ()> {
    for (at, &hint) in hints.iter().enumerate() {
        let lits = formula.get(&hint).ok_or(())?;
        let mut unit = None;
        let mut unassigned = 0;
        let mut satisfied = false;
        for &lit in lits {
            match value(model, lit) {
                Some(true) => {
                    satisfied = true;
                    break;
                }
                Some(false) => {}
                None => {
                    unassigned += 1;
                    unit = Some(lit);
                }
            }
        }
        if satisfied {
            return Err(());
        }
        match unassigned {
            0 => {
                if at + 1 < hints.len() {
                    return Err(());
                }
                return Ok(true);
            }
            1 => {
                let lit = unit.unwrap();
                model.insert(var(lit), lit > 0);
            }
            _ => return Err(()),
        }
    }
    Ok(false)
}

/// Accept/reject verdict of an independent re-implementation that recomputes
/// the candidate set and compares it as a set (with multiplicity) rather than
/// walking the database in order.
pub fn reference_check(formula: &RawFormula, step: &CandidateStep) -> bool {
    let mut model = HashMap::new();
    for &lit in &step.clause {
        match value(&model, lit) {
            None => falsify(&mut model, lit),
            Some(false) => {}
            Some(true) => return false,
        }
    }
    match ref_propagate(formula, &mut model, &step.prefix) {
        Err(()) => return false,
        Ok(true) => return step.groups.is_empty(),
        Ok(false) => {}
    }
    if step.clause.is_empty() {
        return false;
    }
    let neg_pivot = -step.clause[0];
    let expected: BTreeSet<u64> = formula
        .iter()
        .filter(|(_, lits)| lits.contains(&neg_pivot))
        .map(|(&id, _)| id)
        .collect();
    let named: BTreeSet<u64> = step.groups.iter().map(|&(id, _)| id).collect();
    if expected != named || named.len() != step.groups.len() {
        return false;
    }
    for (id, units) in &step.groups {
        let lits = &formula[id];
        let resolvent: Vec<i64> = lits.iter().copied().filter(|&l| l != neg_pivot).collect();
        if resolvent.iter().any(|&l| value(&model, l) == Some(true)) {
            if units.is_empty() {
                continue;
            }
            return false;
        }
        if units.is_empty() {
            return false;
        }
        let mut sub = model.clone();
        for &lit in &resolvent {
            if value(&sub, lit).is_none() {
                falsify(&mut sub, lit);
            }
        }
        if ref_propagate(formula, &mut sub, units) != Ok(true) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Resolution saturation: derives genuine refutations for small formulas

pub enum Saturation {
    /// A complete proof ending in the empty clause.
    Refuted(Vec<(u64, ProofLine)>),
    /// Saturated without the empty clause: the formula is satisfiable.
    Satisfiable,
    /// Gave up; no claim either way.
    CapHit,
}

fn resolvent_of(a: &[i64], b: &[i64], pivot: i64) -> Option<Vec<i64>> {
    let mut merged: BTreeSet<i64> = a.iter().copied().filter(|&l| l != pivot).collect();
    merged.extend(b.iter().copied().filter(|&l| l != -pivot));
    let mut seen = HashSet::new();
    for &lit in &merged {
        if !seen.insert(var(lit)) {
            return None; // tautology
        }
    }
    let mut out: Vec<i64> = merged.into_iter().collect();
    out.sort_unstable_by_key(|l| l.unsigned_abs());
    Some(out)
}

/// Saturates resolution over the formula, emitting each non-tautological new
/// resolvent as an addition hinted by its two parents. Every such addition
/// replays as: parent one becomes unit on the pivot, parent two is falsified.
pub fn saturate(formula: &RawFormula, clause_cap: usize) -> Saturation {
    let mut clauses: Vec<(u64, Vec<i64>)> =
        formula.iter().map(|(&id, lits)| (id, lits.clone())).collect();
    let mut seen: HashSet<Vec<i64>> = clauses
        .iter()
        .map(|(_, lits)| {
            let mut key = lits.clone();
            key.sort_unstable();
            key
        })
        .collect();
    let mut next_id = formula.keys().max().copied().unwrap_or(0) + 1;
    let mut lines: Vec<(u64, ProofLine)> = Vec::new();
    let mut line_no = 0u64;

    let mut frontier = 0usize;
    while frontier < clauses.len() {
        for left in 0..frontier {
            // Resolving (first, second) on every pivot of `first` whose
            // negation is in `second` covers the unordered pair completely:
            // the mirrored orientation yields the same resolvents.
            let (first, second) = (clauses[left].clone(), clauses[frontier].clone());
            for &pivot in &first.1 {
                if !second.1.contains(&(-pivot)) {
                    continue;
                }
                let Some(resolvent) = resolvent_of(&first.1, &second.1, pivot) else {
                    continue;
                };
                let mut key = resolvent.clone();
                key.sort_unstable();
                if !seen.insert(key) {
                    continue;
                }
                line_no += 1;
                let addition = Addition {
                    id: ClauseId::new(next_id),
                    clause: Clause::from_ints(&resolvent),
                    hints: HintStructure::at_only(vec![
                        ClauseId::new(first.0),
                        ClauseId::new(second.0),
                    ]),
                };
                lines.push((line_no, ProofLine::Addition(addition)));
                if resolvent.is_empty() {
                    return Saturation::Refuted(lines);
                }
                clauses.push((next_id, resolvent));
                next_id += 1;
                if clauses.len() > clause_cap {
                    return Saturation::CapHit;
                }
            }
        }
        frontier += 1;
    }
    Saturation::Satisfiable
}

// ---------------------------------------------------------------------------
// Synthetic chain instance for the performance tests

/// Writes a 1000-variable formula and a refutation with exactly `additions`
/// addition steps (at most two hints each). Derived padding clauses are
/// deleted round by round, so the active set stays small no matter how long
/// the proof is.
pub fn write_chain_instance(dir: &Path, name: &str, additions: usize) -> (PathBuf, PathBuf) {
    assert!(additions >= 1100, "need room for the unit chain and finale");
    let vars: u64 = 1000;
    let orig = |j: u64| j + 2; // id of [-j, j+1]

    let cnf_path = dir.join(format!("{name}.cnf"));
    let mut cnf = std::io::BufWriter::new(std::fs::File::create(&cnf_path).unwrap());
    writeln!(cnf, "p cnf {vars} {}", vars + 1).unwrap();
    writeln!(cnf, "1 0").unwrap();
    writeln!(cnf, "-{vars} 0").unwrap();
    for i in 1..vars {
        writeln!(cnf, "-{i} {} 0", i + 1).unwrap();
    }
    cnf.flush().unwrap();

    let proof_path = dir.join(format!("{name}.lrat"));
    let mut proof = std::io::BufWriter::new(std::fs::File::create(&proof_path).unwrap());
    let mut next_id: u64 = vars + 2;
    let mut last_id: u64 = vars + 1;
    let mut emitted = 0usize;
    let padding = additions - vars as usize;

    // Rounds of transitive chain clauses [-i, i+d], each hinted by the
    // previous round's clause for i and one original chain clause.
    let mut prev_ids: Vec<u64> = (1..vars).map(orig).collect();
    let mut prev_is_original = true;
    let mut distance: u64 = 2;
    while emitted < padding {
        assert!(distance < vars - 1, "padding exceeds chain capacity");
        let mut cur_ids = Vec::new();
        for i in 1..=(vars - distance) {
            if emitted == padding {
                break;
            }
            writeln!(
                proof,
                "{next_id} -{i} {} 0 {} {} 0",
                i + distance,
                prev_ids[(i - 1) as usize],
                orig(i + distance - 1),
            )
            .unwrap();
            cur_ids.push(next_id);
            last_id = next_id;
            next_id += 1;
            emitted += 1;
        }
        if !prev_is_original {
            write_deletion(&mut proof, last_id, &prev_ids);
        }
        prev_ids = cur_ids;
        prev_is_original = false;
        distance += 1;
    }
    if !prev_is_original && !prev_ids.is_empty() {
        write_deletion(&mut proof, last_id, &prev_ids);
    }

    // Unit chain up the originals, then the final conflict with [-1000].
    let mut prev_unit: u64 = 1;
    for k in 2..=vars {
        writeln!(proof, "{next_id} {k} 0 {prev_unit} {} 0", orig(k - 1)).unwrap();
        prev_unit = next_id;
        next_id += 1;
    }
    writeln!(proof, "{next_id} 0 {prev_unit} 2 0").unwrap();
    proof.flush().unwrap();

    (cnf_path, proof_path)
}

fn write_deletion(out: &mut impl Write, leading: u64, targets: &[u64]) {
    let mut line = String::with_capacity(targets.len() * 7 + 16);
    line.push_str(&leading.to_string());
    line.push_str(" d");
    for id in targets {
        line.push(' ');
        line.push_str(&id.to_string());
    }
    line.push_str(" 0");
    writeln!(out, "{line}").unwrap();
}

// ---------------------------------------------------------------------------
// Misc plumbing

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn load_fixture_doc(name: &str) -> CnfDocument {
    let bytes = std::fs::read(fixture(name)).unwrap();
    lratcheck::parse_dimacs(
        &bytes,
        lratcheck::Strictness::Strict,
        &mut lratcheck::Diagnostics::new(),
    )
    .unwrap()
}

pub fn parse_lines(text: &str) -> Vec<(u64, ProofLine)> {
    lratcheck::ProofStream::new(text.as_bytes(), lratcheck::Strictness::Strict)
        .map(|item| item.unwrap())
        .collect()
}

pub fn literal_sets(db: &lratcheck::ClauseDb) -> Vec<(u64, Vec<Literal>)> {
    db.iter_active()
        .map(|(id, clause)| (id.get(), clause.literal_set()))
        .collect()
}
