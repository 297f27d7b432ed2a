//! The propagation trail: a checkpointed partial assignment with
//! constant-time polarity lookup.
//!
//! The tri-state map is indexed by variable and grows on demand, so the
//! variable universe is not bounded by the DIMACS header. The stack of
//! assigned literals makes rollback cost proportional to the assignments made
//! since the checkpoint, which RAT checking relies on (one rollback per
//! candidate group).

use crate::clause::Clause;
use crate::literal::Literal;

#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
enum Slot {
    #[default]
    Unassigned,
    True,
    False,
}

/// Result of assuming the negation of a clause.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum NegationOutcome {
    /// Every literal of the clause is now false on the trail.
    Falsified,
    /// Some literal was already true under an earlier assignment; the caller
    /// decides what that means.
    AlreadySatisfied,
}

#[derive(Clone, Debug, Default)]
pub struct Trail {
    values: Vec<Slot>,
    stack: Vec<Literal>,
    checkpoints: Vec<usize>,
}

impl Trail {
    pub fn new() -> Trail {
        Trail::default()
    }

    fn slot(&self, var: u64) -> Slot {
        self.values.get(var as usize).copied().unwrap_or_default()
    }

    /// `Some(true)` iff the literal is true, `Some(false)` iff false,
    /// `None` iff its variable is unassigned.
    pub fn value(&self, lit: Literal) -> Option<bool> {
        match self.slot(lit.variable()) {
            Slot::Unassigned => None,
            Slot::True => Some(lit.is_positive()),
            Slot::False => Some(!lit.is_positive()),
        }
    }

    pub fn is_true(&self, lit: Literal) -> bool {
        self.value(lit) == Some(true)
    }

    pub fn is_false(&self, lit: Literal) -> bool {
        self.value(lit) == Some(false)
    }

    pub fn is_unassigned(&self, lit: Literal) -> bool {
        self.value(lit).is_none()
    }

    /// Makes `lit` true. The variable must be unassigned.
    pub fn assign_true(&mut self, lit: Literal) {
        debug_assert!(self.is_unassigned(lit), "variable {} assigned twice", lit.variable());
        let var = lit.variable() as usize;
        if var >= self.values.len() {
            self.values.resize(var + 1, Slot::Unassigned);
        }
        self.values[var] = if lit.is_positive() { Slot::True } else { Slot::False };
        self.stack.push(lit);
    }

    /// Number of literals currently on the stack.
    pub fn depth(&self) -> usize {
        self.stack.len()
    }

    pub fn checkpoint(&mut self) {
        self.checkpoints.push(self.stack.len());
    }

    pub fn checkpoint_count(&self) -> usize {
        self.checkpoints.len()
    }

    /// Unassigns everything pushed since the most recent checkpoint.
    pub fn rollback(&mut self) {
        let mark = self.checkpoints.pop().expect("rollback without checkpoint");
        while self.stack.len() > mark {
            let lit = self.stack.pop().unwrap();
            self.values[lit.variable() as usize] = Slot::Unassigned;
        }
    }

    /// Assumes the negation of `clause`: every unassigned literal is assigned
    /// false, literals already false are skipped, and a literal already true
    /// is reported without touching its variable.
    pub fn falsify_clause(&mut self, clause: &Clause) -> NegationOutcome {
        let mut satisfied = false;
        for &lit in clause.iter() {
            match self.value(lit) {
                None => self.assign_true(lit.negate()),
                Some(false) => {}
                Some(true) => satisfied = true,
            }
        }
        if satisfied {
            NegationOutcome::AlreadySatisfied
        } else {
            NegationOutcome::Falsified
        }
    }

    /// The assigned variables and their polarities, sorted by variable.
    /// Extensional view for equality checks in tests.
    pub fn snapshot(&self) -> Vec<(u64, bool)> {
        let mut pairs: Vec<(u64, bool)> = self
            .stack
            .iter()
            .map(|l| (l.variable(), l.is_positive()))
            .collect();
        pairs.sort_unstable();
        pairs
    }
}
