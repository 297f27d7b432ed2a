//! Literals and clause identifiers.

use std::fmt;

/// A propositional literal encoded as a nonzero signed integer: the absolute
/// value names the variable, the sign gives the polarity.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(i64);

impl Literal {
    /// Wraps a raw encoded literal. `value` must not be zero; zero is the
    /// clause terminator in both file formats, never a literal.
    #[inline]
    pub fn new(value: i64) -> Literal {
        debug_assert!(value != 0, "zero is a terminator, not a literal");
        Literal(value)
    }

    #[inline]
    pub fn get(self) -> i64 {
        self.0
    }

    /// The variable index `|value|`.
    #[inline]
    pub fn variable(self) -> u64 {
        self.0.unsigned_abs()
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    #[inline]
    pub fn negate(self) -> Literal {
        Literal(-self.0)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of a clause in the database. Proof files number clauses from 1;
/// zero never names a clause.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseId(u64);

impl ClauseId {
    #[inline]
    pub fn new(id: u64) -> ClauseId {
        debug_assert!(id >= 1, "clause identifiers start at 1");
        ClauseId(id)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
