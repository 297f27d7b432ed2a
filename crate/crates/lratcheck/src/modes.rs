//! Whole-proof drivers: refutation, entailment, unverified application, and
//! partitioned checking.
//!
//! All four share one loop over proof lines. Refutation demands that the
//! empty clause is derived. Entailment instead accepts when every line checks
//! out and each clause of a target formula occurs (as a literal set) among
//! the active clauses at the end. Partitioned checking first applies each
//! part without verification to compute the intermediate formulas, then
//! verifies every part as an entailment of the next formula, in parallel over
//! private copies.

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::checker::{Checker, RejectReason};
use crate::clause::{Clause, ProofLine};
use crate::db::{ClauseDb, DbError};
use crate::diag::{Diagnostics, Strictness};
use crate::dimacs::CnfDocument;
use crate::literal::{ClauseId, Literal};
use crate::lrat::LratError;

/// Why a run did not verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureDetail {
    Parse(LratError),
    Db(DbError),
    Step { id: ClauseId, reason: RejectReason },
    /// A deletion line's leading id fell below the last added clause id
    /// (strict mode).
    DeletionIdOrder { id: ClauseId, last_added: u64 },
    /// 1-based index of the first target clause absent from the final
    /// formula.
    MissingTargetClause { index: usize },
    /// The proof ran out without deriving the empty clause.
    NoEmptyClause,
    /// A partition failed; the index is 1-based.
    Part { index: usize, cause: Box<Failure> },
}

/// A failure, located at a physical proof line where one applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub line: Option<u64>,
    pub detail: FailureDetail,
}

impl Failure {
    fn at(line: u64, detail: FailureDetail) -> Failure {
        Failure {
            line: Some(line),
            detail,
        }
    }

    fn unlocated(detail: FailureDetail) -> Failure {
        Failure { line: None, detail }
    }

    /// True when the underlying cause is an I/O error rather than anything
    /// about the proof.
    pub fn is_io(&self) -> bool {
        match &self.detail {
            FailureDetail::Parse(e) => matches!(e.kind, crate::lrat::LratErrorKind::Io(_)),
            FailureDetail::Part { cause, .. } => cause.is_io(),
            _ => false,
        }
    }
}

impl fmt::Display for FailureDetail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureDetail::Parse(e) => write!(f, "{}", e.kind),
            FailureDetail::Db(e) => write!(f, "{e}"),
            FailureDetail::Step { id, reason } => write!(f, "step {id} rejected: {reason}"),
            FailureDetail::DeletionIdOrder { id, last_added } => write!(
                f,
                "DeletionIdOrder: deletion line id {id} is below the last added clause {last_added}"
            ),
            FailureDetail::MissingTargetClause { index } => {
                write!(f, "MissingTargetClause {index}")
            }
            FailureDetail::NoEmptyClause => {
                write!(f, "NoEmptyClause: the proof does not derive the empty clause")
            }
            FailureDetail::Part { index, cause } => write!(f, "part {index}: {cause}"),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "proof line {line}: {}", self.detail),
            None => write!(f, "{}", self.detail),
        }
    }
}

/// Outcome of a whole-proof run.
#[derive(Debug)]
pub struct RunResult {
    pub verified: bool,
    pub final_db: ClauseDb,
    pub empty_clause_derived: bool,
    /// Addition steps validated (or applied, for the unverified driver).
    pub steps_checked: usize,
    /// Deletion lines applied.
    pub deletion_lines: usize,
    pub failure: Option<Failure>,
}

struct Drive {
    db: ClauseDb,
    empty_clause_derived: bool,
    steps_checked: usize,
    deletion_lines: usize,
    failure: Option<Failure>,
    warnings: Vec<String>,
}

/// The shared line loop. With `verify` unset this is plain application:
/// hints are ignored but the id discipline still holds.
fn drive<I>(
    db: ClauseDb,
    declared_vars: Option<u64>,
    lines: I,
    strictness: Strictness,
    verify: bool,
) -> Drive
where
    I: IntoIterator<Item = Result<(u64, ProofLine), LratError>>,
{
    let mut checker = Checker::new(db, strictness);
    if let Some(vars) = declared_vars {
        checker = checker.with_declared_vars(vars);
    }
    let mut outcome = Drive {
        db: ClauseDb::new(),
        empty_clause_derived: false,
        steps_checked: 0,
        deletion_lines: 0,
        failure: None,
        warnings: Vec::new(),
    };
    let mut last_added: u64 = 0;
    let mut lines = lines.into_iter();

    for item in lines.by_ref() {
        let (line_no, line) = match item {
            Ok(pair) => pair,
            Err(e) => {
                outcome.failure = Some(Failure::at(e.line, FailureDetail::Parse(e)));
                break;
            }
        };
        match line {
            ProofLine::Deletion(deletion) => {
                if strictness.is_strict() && deletion.id.get() < last_added {
                    outcome.failure = Some(Failure::at(
                        line_no,
                        FailureDetail::DeletionIdOrder {
                            id: deletion.id,
                            last_added,
                        },
                    ));
                    break;
                }
                if let Err(e) = checker.apply_deletion(&deletion.targets) {
                    outcome.failure = Some(Failure::at(line_no, FailureDetail::Db(e)));
                    break;
                }
                outcome.deletion_lines += 1;
            }
            ProofLine::Addition(addition) => {
                if verify {
                    let verdict = checker.check_addition(&addition);
                    if let crate::checker::StepVerdict::Rejected(reason) = verdict {
                        outcome.failure = Some(Failure::at(
                            line_no,
                            FailureDetail::Step {
                                id: addition.id,
                                reason,
                            },
                        ));
                        break;
                    }
                }
                let is_empty = addition.clause.is_empty();
                if let Err(e) = checker.insert(addition.id, addition.clause) {
                    outcome.failure = Some(Failure::at(line_no, FailureDetail::Db(e)));
                    break;
                }
                last_added = addition.id.get();
                outcome.steps_checked += 1;
                if is_empty && verify {
                    outcome.empty_clause_derived = true;
                    if lines.next().is_some() {
                        outcome
                            .warnings
                            .push("proof lines after the empty clause are ignored".to_string());
                    }
                    break;
                }
                if is_empty {
                    outcome.empty_clause_derived = true;
                }
            }
        }
    }

    outcome.warnings.extend(checker.take_diagnostics());
    outcome.db = checker.into_db();
    outcome
}

/// Checks a refutation: every addition must be redundant and the empty
/// clause must be derived. Lines after the empty clause are ignored with a
/// warning.
pub fn run_refutation<I>(
    cnf: &CnfDocument,
    proof: I,
    strictness: Strictness,
    diag: &mut Diagnostics,
) -> RunResult
where
    I: IntoIterator<Item = Result<(u64, ProofLine), LratError>>,
{
    let db = ClauseDb::from_cnf(cnf);
    let drive = drive(db, Some(cnf.num_vars_declared), proof, strictness, true);
    diag.extend(drive.warnings);
    let failure = drive.failure.or(if drive.empty_clause_derived {
        None
    } else {
        Some(Failure::unlocated(FailureDetail::NoEmptyClause))
    });
    RunResult {
        verified: drive.empty_clause_derived,
        final_db: drive.db,
        empty_clause_derived: drive.empty_clause_derived,
        steps_checked: drive.steps_checked,
        deletion_lines: drive.deletion_lines,
        failure,
    }
}

fn clause_key(clause: &Clause) -> Vec<Literal> {
    clause.literal_set()
}

/// 1-based index of the first target clause absent from the active set.
fn first_missing_target(db: &ClauseDb, target: &[Clause]) -> Option<usize> {
    let active: HashSet<Vec<Literal>> = db.iter_active().map(|(_, c)| clause_key(c)).collect();
    target
        .iter()
        .position(|clause| !active.contains(&clause_key(clause)))
        .map(|index| index + 1)
}

/// Checks a reduction: every line must verify, and afterwards every clause of
/// `target` must occur (as a set of literals, order-insensitive) among the
/// active clauses. Deriving the empty clause verifies any target.
pub fn run_entailment<I>(
    cnf: &CnfDocument,
    proof: I,
    target: &CnfDocument,
    strictness: Strictness,
    diag: &mut Diagnostics,
) -> RunResult
where
    I: IntoIterator<Item = Result<(u64, ProofLine), LratError>>,
{
    let db = ClauseDb::from_cnf(cnf);
    let drive = drive(db, Some(cnf.num_vars_declared), proof, strictness, true);
    diag.extend(drive.warnings);

    let mut failure = drive.failure;
    let verified = drive.empty_clause_derived
        || (failure.is_none() && {
            match first_missing_target(&drive.db, &target.clauses) {
                None => true,
                Some(index) => {
                    failure =
                        Some(Failure::unlocated(FailureDetail::MissingTargetClause { index }));
                    false
                }
            }
        });
    RunResult {
        verified,
        final_db: drive.db,
        empty_clause_derived: drive.empty_clause_derived,
        steps_checked: drive.steps_checked,
        deletion_lines: drive.deletion_lines,
        failure,
    }
}

/// Applies every insertion and deletion with no hint checking. Only parse
/// and id-discipline errors can fail.
pub fn apply_unverified<I>(
    cnf: &CnfDocument,
    proof: I,
    strictness: Strictness,
    diag: &mut Diagnostics,
) -> Result<ClauseDb, Failure>
where
    I: IntoIterator<Item = Result<(u64, ProofLine), LratError>>,
{
    apply_to_db(ClauseDb::from_cnf(cnf), proof, strictness, diag)
}

fn apply_to_db<I>(
    db: ClauseDb,
    proof: I,
    strictness: Strictness,
    diag: &mut Diagnostics,
) -> Result<ClauseDb, Failure>
where
    I: IntoIterator<Item = Result<(u64, ProofLine), LratError>>,
{
    let drive = drive(db, None, proof, strictness, false);
    diag.extend(drive.warnings);
    match drive.failure {
        Some(failure) => Err(failure),
        None => Ok(drive.db),
    }
}

struct PartReport {
    verified: bool,
    empty_clause_derived: bool,
    steps_checked: usize,
    deletion_lines: usize,
    failure: Option<Failure>,
    warnings: Vec<String>,
}

/// Runs up to `jobs` workers over `count` indexed tasks, returning results in
/// index order regardless of scheduling.
fn parallel_map<T, F>(count: usize, jobs: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let jobs = jobs.clamp(1, count.max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..count).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= count {
                    break;
                }
                let result = task(index);
                *slots[index].lock().unwrap() = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("worker filled every slot"))
        .collect()
}

/// Partitioned checking. The intermediate formulas are computed by applying
/// each part unverified in sequence; each part is then verified as an
/// entailment of the next formula, with one private database copy per
/// worker. The whole proof verifies iff every part does and some part derives
/// the empty clause.
///
/// `targets`, when given, supplies one externally provided target formula per
/// part in place of the computed ones.
pub fn run_partitioned(
    cnf: &CnfDocument,
    parts: &[Vec<(u64, ProofLine)>],
    jobs: usize,
    targets: Option<&[CnfDocument]>,
    strictness: Strictness,
    diag: &mut Diagnostics,
) -> RunResult {
    assert!(!parts.is_empty(), "partitioned checking needs at least one part");
    if let Some(targets) = targets {
        assert_eq!(targets.len(), parts.len(), "one target per part");
    }

    // Sequential apply phase: compute the formula entering each part.
    let mut stages: Vec<ClauseDb> = vec![ClauseDb::from_cnf(cnf)];
    for (index, part) in parts.iter().enumerate() {
        let db = stages.last().expect("seeded with the initial formula").clone();
        match apply_to_db(db, part.iter().cloned().map(Ok), strictness, diag) {
            Ok(next) => stages.push(next),
            Err(cause) => {
                let failure = Failure::unlocated(FailureDetail::Part {
                    index: index + 1,
                    cause: Box::new(cause),
                });
                let final_db = stages.pop().expect("nonempty");
                return RunResult {
                    verified: false,
                    final_db,
                    empty_clause_derived: false,
                    steps_checked: 0,
                    deletion_lines: 0,
                    failure: Some(failure),
                };
            }
        }
    }

    // Parallel verify phase over private copies.
    let work: Vec<Mutex<Option<(ClauseDb, Vec<Clause>)>>> = (0..parts.len())
        .map(|index| {
            let input = stages[index].clone();
            let target: Vec<Clause> = match targets {
                Some(targets) => targets[index].clauses.clone(),
                None => stages[index + 1].iter_active().map(|(_, c)| c.clone()).collect(),
            };
            Mutex::new(Some((input, target)))
        })
        .collect();

    let declared = cnf.num_vars_declared;
    let reports = parallel_map(parts.len(), jobs, |index| {
        let (db, target) = work[index].lock().unwrap().take().expect("taken once");
        let drive = drive(db, Some(declared), parts[index].iter().cloned().map(Ok), strictness, true);
        let mut failure = drive.failure;
        let verified = drive.empty_clause_derived
            || (failure.is_none() && {
                match first_missing_target(&drive.db, &target) {
                    None => true,
                    Some(missing) => {
                        failure = Some(Failure::unlocated(FailureDetail::MissingTargetClause {
                            index: missing,
                        }));
                        false
                    }
                }
            });
        PartReport {
            verified,
            empty_clause_derived: drive.empty_clause_derived,
            steps_checked: drive.steps_checked,
            deletion_lines: drive.deletion_lines,
            failure,
            warnings: drive.warnings,
        }
    });

    let mut failure: Option<Failure> = None;
    let mut steps_checked = 0;
    let mut deletion_lines = 0;
    let mut empty_clause_derived = false;
    let mut all_verified = true;
    for (index, report) in reports.into_iter().enumerate() {
        for warning in report.warnings {
            diag.warn(format!("part {}: {warning}", index + 1));
        }
        steps_checked += report.steps_checked;
        deletion_lines += report.deletion_lines;
        empty_clause_derived |= report.empty_clause_derived;
        if !report.verified && failure.is_none() {
            let cause = report.failure.unwrap_or(Failure::unlocated(FailureDetail::NoEmptyClause));
            failure = Some(Failure::unlocated(FailureDetail::Part {
                index: index + 1,
                cause: Box::new(cause),
            }));
        }
        all_verified &= report.verified;
    }
    let verified = all_verified && empty_clause_derived;
    if verified {
        failure = None;
    } else if failure.is_none() && !empty_clause_derived {
        failure = Some(Failure::unlocated(FailureDetail::NoEmptyClause));
    }

    RunResult {
        verified,
        final_db: stages.pop().expect("nonempty"),
        empty_clause_derived,
        steps_checked,
        deletion_lines,
        failure,
    }
}
