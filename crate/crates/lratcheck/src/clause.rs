//! Clauses, hint structures, and parsed proof lines.

use std::fmt;

use crate::diag::Strictness;
use crate::literal::{ClauseId, Literal};

/// An ordered sequence of literals. For proof clauses the first literal is
/// the RAT pivot; original formula clauses are kept verbatim, including any
/// duplicate or complementary literals they may contain.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

/// Why a proof clause was rejected at ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseIssue {
    /// Two literals share a variable (duplicate or complementary pair).
    DuplicateOrComplementary { variable: u64 },
    /// Literals after the pivot are not in strictly increasing variable order.
    UnsortedTail { variable: u64 },
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Clause {
        Clause { literals }
    }

    /// Convenience constructor from raw encoded literals.
    pub fn from_ints(values: &[i64]) -> Clause {
        Clause::new(values.iter().map(|&v| Literal::new(v)).collect())
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    #[inline]
    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    #[inline]
    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.literals.iter()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.contains(&lit)
    }

    /// Largest variable index used, or 0 for the empty clause.
    pub fn max_var(&self) -> u64 {
        self.literals.iter().map(|l| l.variable()).max().unwrap_or(0)
    }

    /// Canonical key for order-insensitive clause comparison: sorted literals
    /// with duplicates collapsed.
    pub fn literal_set(&self) -> Vec<Literal> {
        let mut key = self.literals.clone();
        key.sort_unstable();
        key.dedup();
        key
    }

    /// Ingestion check for proof clauses. A duplicate or complementary pair
    /// is always an error; in strict mode the literals after the pivot must
    /// additionally be in strictly increasing variable order.
    pub fn validate_for_proof(&self, strictness: Strictness) -> Result<(), ClauseIssue> {
        if strictness.is_strict() {
            // The sorted tail makes the duplicate check linear: equal adjacent
            // variables are a duplicate/complementary pair, decreasing ones a
            // sortedness violation. The pivot is exempt from the ordering but
            // not from the variable-disjointness requirement.
            for pair in self.literals[self.literals.len().min(1)..].windows(2) {
                let (a, b) = (pair[0].variable(), pair[1].variable());
                if a == b {
                    return Err(ClauseIssue::DuplicateOrComplementary { variable: a });
                }
                if a > b {
                    return Err(ClauseIssue::UnsortedTail { variable: b });
                }
            }
            if let Some(&pivot) = self.literals.first() {
                if self.literals[1..]
                    .iter()
                    .any(|l| l.variable() == pivot.variable())
                {
                    return Err(ClauseIssue::DuplicateOrComplementary {
                        variable: pivot.variable(),
                    });
                }
            }
        } else {
            let mut seen = std::collections::HashSet::new();
            for lit in &self.literals {
                if !seen.insert(lit.variable()) {
                    return Err(ClauseIssue::DuplicateOrComplementary {
                        variable: lit.variable(),
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for lit in &self.literals {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{lit}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// One RAT resolution group: a candidate clause containing the negated pivot
/// and the unit hints that drive its resolvent to a conflict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatGroup {
    pub candidate: ClauseId,
    pub units: Vec<ClauseId>,
}

/// The hint section of an addition line. Positive hints before the first
/// negative hint form the prefix; each negative hint opens a resolution group.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HintStructure {
    pub prefix: Vec<ClauseId>,
    pub groups: Vec<RatGroup>,
}

impl HintStructure {
    pub fn at_only(prefix: Vec<ClauseId>) -> HintStructure {
        HintStructure {
            prefix,
            groups: Vec::new(),
        }
    }
}

/// A clause addition step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Addition {
    pub id: ClauseId,
    pub clause: Clause,
    pub hints: HintStructure,
}

/// A clause deletion step. An empty target list is a legal no-op.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Deletion {
    pub id: ClauseId,
    pub targets: Vec<ClauseId>,
}

/// One parsed proof line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProofLine {
    Addition(Addition),
    Deletion(Deletion),
}

impl ProofLine {
    pub fn leading_id(&self) -> ClauseId {
        match self {
            ProofLine::Addition(a) => a.id,
            ProofLine::Deletion(d) => d.id,
        }
    }
}

impl fmt::Display for ProofLine {
    /// Canonical single-space serialization, reparseable to an equal line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofLine::Addition(a) => {
                write!(f, "{}", a.id)?;
                for lit in a.clause.iter() {
                    write!(f, " {lit}")?;
                }
                write!(f, " 0")?;
                for id in &a.hints.prefix {
                    write!(f, " {id}")?;
                }
                for group in &a.hints.groups {
                    write!(f, " -{}", group.candidate)?;
                    for id in &group.units {
                        write!(f, " {id}")?;
                    }
                }
                write!(f, " 0")
            }
            ProofLine::Deletion(d) => {
                write!(f, "{} d", d.id)?;
                for id in &d.targets {
                    write!(f, " {id}")?;
                }
                write!(f, " 0")
            }
        }
    }
}
