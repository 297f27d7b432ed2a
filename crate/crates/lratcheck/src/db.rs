//! The indexed clause database holding the evolving formula.
//!
//! Active clauses live in an ordered map so the RAT candidate scan can walk
//! them in strictly increasing id order. Deleting a clause frees its storage
//! immediately; which ids were ever used is remembered separately as a set of
//! coalesced intervals, so memory stays proportional to the active formula
//! rather than to the proof length.

use std::collections::BTreeMap;

use crate::clause::Clause;
use crate::diag::Strictness;
use crate::dimacs::CnfDocument;
use crate::literal::ClauseId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DbError {
    /// The id was already used, or is not above the high-water mark in
    /// strict mode. Ids are never reused, deleted or not.
    #[error("IdReuse {0}")]
    IdReuse(ClauseId),
    /// The id never named a clause.
    #[error("UnknownClause {0}")]
    UnknownClause(ClauseId),
    /// The id named a clause that was already deleted.
    #[error("DoubleDelete {0}")]
    DoubleDelete(ClauseId),
}

/// Set of u64 ids stored as coalesced inclusive ranges. Proof ids are close
/// to contiguous, so this stays a handful of entries no matter how many
/// clauses come and go.
#[derive(Clone, Debug, Default)]
struct IdIntervals {
    runs: BTreeMap<u64, u64>,
}

impl IdIntervals {
    fn contains(&self, id: u64) -> bool {
        self.runs
            .range(..=id)
            .next_back()
            .is_some_and(|(_, &end)| end >= id)
    }

    fn insert(&mut self, id: u64) {
        if self.contains(id) {
            return;
        }
        let left = self
            .runs
            .range(..id)
            .next_back()
            .map(|(&start, &end)| (start, end));
        let right = id
            .checked_add(1)
            .and_then(|next| self.runs.get(&next).map(|&end| (next, end)));
        match (left, right) {
            (Some((ls, le)), Some((rs, re))) if le + 1 == id => {
                self.runs.remove(&rs);
                self.runs.insert(ls, re);
            }
            (Some((ls, le)), _) if le + 1 == id => {
                self.runs.insert(ls, id);
            }
            (_, Some((rs, re))) => {
                self.runs.remove(&rs);
                self.runs.insert(id, re);
            }
            _ => {
                self.runs.insert(id, id);
            }
        }
    }

    #[cfg(test)]
    fn run_count(&self) -> usize {
        self.runs.len()
    }
}

/// Index-addressable set of active clauses.
#[derive(Clone, Debug, Default)]
pub struct ClauseDb {
    active: BTreeMap<u64, Clause>,
    inserted: IdIntervals,
    max_id: u64,
    #[cfg(test)]
    pub(crate) access_log: std::cell::RefCell<Option<Vec<u64>>>,
}

impl ClauseDb {
    pub fn new() -> ClauseDb {
        ClauseDb::default()
    }

    /// Loads a parsed CNF, numbering its clauses 1..m in file order.
    pub fn from_cnf(doc: &CnfDocument) -> ClauseDb {
        let mut db = ClauseDb::new();
        for (index, clause) in doc.clauses.iter().enumerate() {
            let id = ClauseId::new(index as u64 + 1);
            db.insert(id, clause.clone(), Strictness::Strict)
                .expect("fresh ids cannot collide");
        }
        db
    }

    /// Inserts an active clause under `id`. Strict mode demands ids strictly
    /// above the high-water mark; lenient mode accepts any id never used
    /// before.
    pub fn insert(
        &mut self,
        id: ClauseId,
        clause: Clause,
        strictness: Strictness,
    ) -> Result<(), DbError> {
        let raw = id.get();
        let fresh = if strictness.is_strict() {
            raw > self.max_id
        } else {
            !self.inserted.contains(raw)
        };
        if !fresh {
            return Err(DbError::IdReuse(id));
        }
        self.inserted.insert(raw);
        self.max_id = self.max_id.max(raw);
        self.active.insert(raw, clause);
        Ok(())
    }

    /// Deactivates a clause and frees its storage. The id stays burned.
    pub fn delete(&mut self, id: ClauseId) -> Result<(), DbError> {
        let raw = id.get();
        if self.active.remove(&raw).is_some() {
            Ok(())
        } else if self.inserted.contains(raw) {
            Err(DbError::DoubleDelete(id))
        } else {
            Err(DbError::UnknownClause(id))
        }
    }

    /// The active clause named by `id`, if any.
    pub fn get(&self, id: ClauseId) -> Option<&Clause> {
        #[cfg(test)]
        if let Some(log) = self.access_log.borrow_mut().as_mut() {
            log.push(id.get());
        }
        self.active.get(&id.get())
    }

    pub fn is_active(&self, id: ClauseId) -> bool {
        self.active.contains_key(&id.get())
    }

    pub fn was_inserted(&self, id: ClauseId) -> bool {
        self.inserted.contains(id.get())
    }

    /// Largest id ever inserted.
    pub fn max_id(&self) -> u64 {
        self.max_id
    }

    pub fn active_len(&self) -> usize {
        self.active.len()
    }

    /// Active clauses in strictly increasing id order.
    pub fn iter_active(&self) -> impl Iterator<Item = (ClauseId, &Clause)> {
        self.active
            .iter()
            .map(|(&id, clause)| (ClauseId::new(id), clause))
    }

    pub fn contains_empty_clause(&self) -> bool {
        self.active.values().any(|c| c.is_empty())
    }

    /// Largest variable index over the active clauses.
    pub fn max_var(&self) -> u64 {
        self.active.values().map(|c| c.max_var()).max().unwrap_or(0)
    }
}
