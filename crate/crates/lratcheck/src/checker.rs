//! Hint-guided validation of AT and RAT clause additions.
//!
//! The defining property of the proof format is that the checker never
//! searches the formula for unit clauses: the hints on each addition line
//! name, left to right, exactly the clauses that become unit and finally the
//! clause that is falsified. The only whole-formula pass is the single
//! increasing-id scan that a RAT check performs to confirm the candidate list
//! is complete.

use crate::clause::{Addition, Clause, HintStructure};
use crate::db::{ClauseDb, DbError};
use crate::diag::{Diagnostics, Strictness};
use crate::literal::{ClauseId, Literal};
use crate::trail::Trail;

/// Result of replaying a hint sequence.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PropagationOutcome {
    /// The final hint clause had every literal false.
    Conflict { assigned: usize },
    /// The hints ran out without reaching a conflict.
    NoConflict { assigned: usize },
}

impl PropagationOutcome {
    pub fn is_conflict(self) -> bool {
        matches!(self, PropagationOutcome::Conflict { .. })
    }

    pub fn assigned(self) -> usize {
        match self {
            PropagationOutcome::Conflict { assigned }
            | PropagationOutcome::NoConflict { assigned } => assigned,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PropagationError {
    /// A hint names a clause that is absent or inactive.
    #[error("UnknownClause {0}")]
    UnknownClause(ClauseId),
    /// A hint clause has two or more unassigned literals.
    #[error("NonUnitHint {0}")]
    NonUnitHint(ClauseId),
    /// A hint clause is satisfied under the trail (strict mode only; lenient
    /// mode skips such hints).
    #[error("SatisfiedHint {0}")]
    SatisfiedHint(ClauseId),
    /// Hints remain after the conflict; the conflict must come last.
    #[error("HintsAfterConflict {0}")]
    HintsAfterConflict(ClauseId),
}

/// Why an addition step was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RejectReason {
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    /// The prefix hints ran out without a conflict.
    #[error("NoConflictAtEnd")]
    NoConflictAtEnd,
    /// An active clause contains the negated pivot but has no group.
    #[error("MissingCandidate {0}")]
    MissingCandidate(ClauseId),
    /// A group names an inactive clause or one without the negated pivot.
    #[error("SpuriousCandidate {0}")]
    SpuriousCandidate(ClauseId),
    /// A group's unit hints ran out without a conflict.
    #[error("GroupNoConflict {0}")]
    GroupNoConflict(ClauseId),
    /// A group has no unit hints, yet its resolvent is not satisfied on the
    /// current trail.
    #[error("EmptyGroupNotTautological {0}")]
    EmptyGroupNotTautological(ClauseId),
    /// A group's resolvent is satisfied on the base trail, yet the group
    /// carries unit hints (strict mode only).
    #[error("DeadGroupHints {0}")]
    DeadGroupHints(ClauseId),
    /// The prefix hints already reached a conflict, yet groups follow
    /// (strict mode only).
    #[error("PrefixConflictWithGroups")]
    PrefixConflictWithGroups,
    /// The empty clause has no pivot, so it cannot carry RAT groups.
    #[error("EmptyClauseNeedsAT")]
    EmptyClauseNeedsAt,
}

/// Verdict on one addition step. A rejection always carries a
/// machine-readable reason; the driver pairs it with the proof line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepVerdict {
    Accepted,
    Rejected(RejectReason),
}

impl StepVerdict {
    pub fn is_accepted(self) -> bool {
        matches!(self, StepVerdict::Accepted)
    }

    fn rejected(reason: impl Into<RejectReason>) -> StepVerdict {
        StepVerdict::Rejected(reason.into())
    }
}

/// A checker instance owns its clause database and trail exclusively;
/// concurrent checking uses one instance per thread over disjoint copies.
pub struct Checker {
    db: ClauseDb,
    trail: Trail,
    strictness: Strictness,
    declared_vars: Option<u64>,
    warned_vars_up_to: u64,
    diag: Diagnostics,
}

impl Checker {
    pub fn new(db: ClauseDb, strictness: Strictness) -> Checker {
        Checker {
            db,
            trail: Trail::new(),
            strictness,
            declared_vars: None,
            warned_vars_up_to: u64::MAX,
            diag: Diagnostics::new(),
        }
    }

    /// Enables the strict-mode warning for proof clauses that use variables
    /// beyond the declared count. The trail grows on demand regardless.
    pub fn with_declared_vars(mut self, vars: u64) -> Checker {
        self.declared_vars = Some(vars);
        self.warned_vars_up_to = vars;
        self
    }

    pub fn db(&self) -> &ClauseDb {
        &self.db
    }

    pub fn into_db(self) -> ClauseDb {
        self.db
    }

    pub fn trail(&self) -> &Trail {
        &self.trail
    }

    pub fn take_diagnostics(&mut self) -> Vec<String> {
        self.diag.take()
    }

    /// Inserts an accepted clause, enforcing the id discipline.
    pub fn insert(&mut self, id: ClauseId, clause: Clause) -> Result<(), DbError> {
        self.db.insert(id, clause, self.strictness)
    }

    /// Applies one deletion line. Strict mode fails on unknown or
    /// already-deleted targets; lenient mode downgrades both to warnings.
    pub fn apply_deletion(&mut self, targets: &[ClauseId]) -> Result<(), DbError> {
        for &target in targets {
            match self.db.delete(target) {
                Ok(()) => {}
                Err(e) if self.strictness.is_strict() => return Err(e),
                Err(e) => self.diag.warn(format!("deletion skipped: {e}")),
            }
        }
        Ok(())
    }

    /// Replays `hints` strictly left to right on the current trail. Each hint
    /// clause must be unit (its literal is then assigned true) until the last
    /// one, which may instead be falsified, yielding a conflict. The formula
    /// is never searched; only the named clauses are inspected.
    pub fn propagate_hints(
        &mut self,
        hints: &[ClauseId],
    ) -> Result<PropagationOutcome, PropagationError> {
        let mut assigned = 0usize;
        let mut index = 0usize;
        while index < hints.len() {
            let id = hints[index];
            let clause = self.db.get(id).ok_or(PropagationError::UnknownClause(id))?;

            let mut unit: Option<Literal> = None;
            let mut satisfied = false;
            let mut unassigned = 0usize;
            for &lit in clause.iter() {
                match self.trail.value(lit) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        unassigned += 1;
                        if unassigned > 1 {
                            break;
                        }
                        unit = Some(lit);
                    }
                }
            }

            if satisfied {
                if self.strictness.is_strict() {
                    return Err(PropagationError::SatisfiedHint(id));
                }
                index += 1;
                continue;
            }
            match unassigned {
                0 => {
                    // Falsified: this must be the final hint.
                    if index + 1 < hints.len() {
                        return Err(PropagationError::HintsAfterConflict(hints[index + 1]));
                    }
                    return Ok(PropagationOutcome::Conflict { assigned });
                }
                1 => {
                    self.trail.assign_true(unit.expect("unit literal recorded"));
                    assigned += 1;
                }
                _ => return Err(PropagationError::NonUnitHint(id)),
            }
            index += 1;
        }
        Ok(PropagationOutcome::NoConflict { assigned })
    }

    /// Checks that `clause` is an asymmetric tautology: assuming its negation
    /// and replaying the prefix hints must end in a conflict. The trail is
    /// restored before returning.
    pub fn check_at(&mut self, clause: &Clause, prefix: &[ClauseId]) -> StepVerdict {
        self.trail.checkpoint();
        self.trail.falsify_clause(clause);
        let outcome = self.propagate_hints(prefix);
        self.trail.rollback();
        match outcome {
            Ok(PropagationOutcome::Conflict { .. }) => StepVerdict::Accepted,
            Ok(PropagationOutcome::NoConflict { .. }) => {
                StepVerdict::rejected(RejectReason::NoConflictAtEnd)
            }
            Err(e) => StepVerdict::rejected(e),
        }
    }

    /// Checks the RAT property of a nonempty `clause` with the first literal
    /// as pivot. The trail is restored before returning.
    pub fn check_rat(&mut self, clause: &Clause, hints: &HintStructure) -> StepVerdict {
        debug_assert!(!clause.is_empty(), "the empty clause has no pivot");
        self.trail.checkpoint();
        let verdict = self.check_rat_inner(clause, hints);
        self.trail.rollback();
        verdict
    }

    fn check_rat_inner(&mut self, clause: &Clause, hints: &HintStructure) -> StepVerdict {
        let pivot = clause.literals()[0];
        let neg_pivot = pivot.negate();

        self.trail.falsify_clause(clause);
        match self.propagate_hints(&hints.prefix) {
            Err(e) => return StepVerdict::rejected(e),
            Ok(PropagationOutcome::Conflict { .. }) => {
                // The step was really AT. Groups after a prefix conflict are
                // dead weight from a confused emitter.
                if hints.groups.is_empty() || !self.strictness.is_strict() {
                    return StepVerdict::Accepted;
                }
                return StepVerdict::rejected(RejectReason::PrefixConflictWithGroups);
            }
            Ok(PropagationOutcome::NoConflict { .. }) => {}
        }

        // The one full scan: active clauses containing the negated pivot, in
        // increasing id order, must equal the group candidates exactly.
        let candidates: Vec<ClauseId> = self
            .db
            .iter_active()
            .filter(|(_, c)| c.contains(neg_pivot))
            .map(|(id, _)| id)
            .collect();
        let mut scan = candidates.iter().peekable();
        for group in &hints.groups {
            match scan.peek() {
                Some(&&expected) if expected == group.candidate => {
                    scan.next();
                }
                Some(&&expected) if expected < group.candidate => {
                    return StepVerdict::rejected(RejectReason::MissingCandidate(expected));
                }
                _ => {
                    return StepVerdict::rejected(RejectReason::SpuriousCandidate(
                        group.candidate,
                    ));
                }
            }
        }
        if let Some(&missing) = scan.next() {
            return StepVerdict::rejected(RejectReason::MissingCandidate(missing));
        }

        for group in &hints.groups {
            let candidate = self
                .db
                .get(group.candidate)
                .expect("candidate verified active by the scan")
                .clone();

            // Resolvent literals are the candidate's minus the negated pivot,
            // which is true on the base trail and must be ignored here.
            let resolvent_satisfied = candidate
                .iter()
                .any(|&lit| lit != neg_pivot && self.trail.is_true(lit));

            if resolvent_satisfied {
                if group.units.is_empty() || !self.strictness.is_strict() {
                    continue;
                }
                return StepVerdict::rejected(RejectReason::DeadGroupHints(group.candidate));
            }
            if group.units.is_empty() {
                return StepVerdict::rejected(RejectReason::EmptyGroupNotTautological(
                    group.candidate,
                ));
            }

            self.trail.checkpoint();
            for &lit in candidate.iter() {
                if lit != neg_pivot && self.trail.is_unassigned(lit) {
                    self.trail.assign_true(lit.negate());
                }
            }
            let outcome = self.propagate_hints(&group.units);
            self.trail.rollback();
            match outcome {
                Ok(PropagationOutcome::Conflict { .. }) => {}
                Ok(PropagationOutcome::NoConflict { .. }) => {
                    return StepVerdict::rejected(RejectReason::GroupNoConflict(group.candidate));
                }
                Err(e) => return StepVerdict::rejected(e),
            }
        }
        StepVerdict::Accepted
    }

    /// Checks one addition line. The empty clause must be AT; a nonempty
    /// clause goes through the RAT check, whose prefix-conflict case
    /// subsumes plain AT and whose empty-candidate case covers vacuous RAT.
    pub fn check_addition(&mut self, addition: &Addition) -> StepVerdict {
        self.warn_on_new_vars(&addition.clause);
        if addition.clause.is_empty() {
            if !addition.hints.groups.is_empty() {
                return StepVerdict::rejected(RejectReason::EmptyClauseNeedsAt);
            }
            self.check_at(&addition.clause, &addition.hints.prefix)
        } else {
            self.check_rat(&addition.clause, &addition.hints)
        }
    }

    fn warn_on_new_vars(&mut self, clause: &Clause) {
        let max_var = clause.max_var();
        if self.strictness.is_strict() && max_var > self.warned_vars_up_to {
            let declared = self.declared_vars.unwrap_or(0);
            self.diag.warn(format!(
                "proof clause uses variable {max_var} beyond the declared count {declared}"
            ));
            self.warned_vars_up_to = max_var;
        }
    }
}
