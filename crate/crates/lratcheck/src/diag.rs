//! Strictness selection and warning collection.

/// How pedantic the checker is about discipline the format does not strictly
/// need for soundness. Strict is the default; lenient downgrades a set of
/// errors (satisfied hints, header mismatches, unsorted clauses, dead group
/// hints) to warnings or skips for compatibility with sloppier emitters.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

impl Strictness {
    #[inline]
    pub fn is_strict(self) -> bool {
        matches!(self, Strictness::Strict)
    }
}

/// Collected warnings. Nothing here affects the verdict; the CLI prints them
/// to stderr.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    warnings: Vec<String>,
}

impl Diagnostics {
    pub fn new() -> Diagnostics {
        Diagnostics::default()
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_empty(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn take(&mut self) -> Vec<String> {
        std::mem::take(&mut self.warnings)
    }

    pub fn extend(&mut self, warnings: Vec<String>) {
        self.warnings.extend(warnings);
    }
}
