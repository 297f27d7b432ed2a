//! Checking of LRAT clausal unsatisfiability proofs.
//!
//! An LRAT proof is a sequence of clause additions and deletions over a
//! DIMACS CNF formula, where every addition carries hints naming the clauses
//! that become unit, left to right, until one is falsified. The hints remove
//! all search from checking: validating a step is a linear replay. Additions
//! may rely on the RAT property, in which case the hints also enumerate every
//! clause containing the negated pivot along with the units refuting its
//! resolvent.
//!
//! The crate provides the domain types ([`Literal`], [`Clause`], [`ClauseDb`],
//! [`Trail`]), parsers for both file formats, the hint-guided checker, and
//! drivers for refutation, entailment, and partitioned checking, plus a
//! brute-force oracle used by the test suite to cross-check verdicts on
//! small formulas.

pub mod checker;
pub mod clause;
pub mod db;
pub mod diag;
pub mod dimacs;
pub mod literal;
pub mod lrat;
pub mod modes;
pub mod oracle;
mod tok;
pub mod trail;

pub use checker::{Checker, PropagationError, PropagationOutcome, RejectReason, StepVerdict};
pub use clause::{Addition, Clause, Deletion, HintStructure, ProofLine, RatGroup};
pub use db::{ClauseDb, DbError};
pub use diag::{Diagnostics, Strictness};
pub use dimacs::{parse_dimacs, CnfDocument, DimacsError};
pub use literal::{ClauseId, Literal};
pub use lrat::{parse_proof_line, LratError, LratErrorKind, ProofStream};
pub use modes::{
    apply_unverified, run_entailment, run_partitioned, run_refutation, Failure, FailureDetail,
    RunResult,
};
pub use oracle::{brute_force_sat, redundancy_oracle, EnumerationBudget};
pub use trail::{NegationOutcome, Trail};
