//! Brute-force satisfiability and redundancy oracle for desk-scale formulas.
//!
//! This is test support, not a SAT solver: it enumerates every assignment
//! over the variables that actually occur, in lexicographic order, and
//! returns the first witness found. It exists so that checker verdicts can be
//! cross-checked against ground truth on small instances.

use std::collections::BTreeSet;

use crate::clause::Clause;
use crate::db::ClauseDb;
use crate::literal::Literal;

/// Cap on the number of distinct variables an enumeration may touch.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_vars: u32,
}

impl Default for EnumerationBudget {
    fn default() -> EnumerationBudget {
        EnumerationBudget { max_vars: 16 }
    }
}

impl EnumerationBudget {
    pub fn new(max_vars: u32) -> EnumerationBudget {
        EnumerationBudget { max_vars }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("BudgetExceeded: {vars} distinct variables exceed the limit of {max}")]
    BudgetExceeded { vars: usize, max: u32 },
}

fn enumerate(
    clauses: &[&Clause],
    budget: EnumerationBudget,
) -> Result<Option<Vec<Literal>>, OracleError> {
    let vars: Vec<u64> = clauses
        .iter()
        .flat_map(|c| c.iter().map(|l| l.variable()))
        .collect::<BTreeSet<u64>>()
        .into_iter()
        .collect();
    if vars.len() > budget.max_vars as usize || vars.len() >= 64 {
        return Err(OracleError::BudgetExceeded {
            vars: vars.len(),
            max: budget.max_vars.min(63),
        });
    }

    let width = vars.len() as u32;
    let value_of = |mask: u64, lit: Literal| -> bool {
        let index = vars.binary_search(&lit.variable()).expect("var collected");
        // Ascending masks enumerate assignments lexicographically over the
        // sorted variables, false before true.
        let positive = mask >> (width - 1 - index as u32) & 1 == 1;
        positive == lit.is_positive()
    };

    // 2^0 = 1 assignment when there are no variables: only clause emptiness matters.
    for mask in 0..(1u64 << width) {
        let satisfied = clauses
            .iter()
            .all(|clause| clause.iter().any(|&lit| value_of(mask, lit)));
        if satisfied {
            let witness = vars
                .iter()
                .enumerate()
                .map(|(index, &var)| {
                    let positive = mask >> (width - 1 - index as u32) & 1 == 1;
                    Literal::new(if positive { var as i64 } else { -(var as i64) })
                })
                .collect();
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Enumerates all assignments over the active clauses. Returns a witness for
/// the first satisfying assignment in lexicographic order, or `None` if the
/// formula is unsatisfiable.
pub fn brute_force_sat(
    db: &ClauseDb,
    budget: EnumerationBudget,
) -> Result<Option<Vec<Literal>>, OracleError> {
    let clauses: Vec<&Clause> = db.iter_active().map(|(_, c)| c).collect();
    enumerate(&clauses, budget)
}

/// True iff adding `clause` preserves satisfiability: the formula is already
/// unsatisfiable, or the formula conjoined with the clause is satisfiable.
pub fn redundancy_oracle(
    db: &ClauseDb,
    clause: &Clause,
    budget: EnumerationBudget,
) -> Result<bool, OracleError> {
    if brute_force_sat(db, budget)?.is_none() {
        return Ok(true);
    }
    let mut clauses: Vec<&Clause> = db.iter_active().map(|(_, c)| c).collect();
    clauses.push(clause);
    Ok(enumerate(&clauses, budget)?.is_some())
}
