//! DIMACS CNF parsing and serialization.
//!
//! Comment lines start with 'c', the single header line is `p cnf <vars>
//! <clauses>`, and every clause is a 0-terminated integer sequence. Clauses
//! may span lines and share lines; the terminator is authoritative. Input
//! clauses are kept verbatim: duplicate or complementary literals in the
//! original formula are legal CNF and affect RAT candidate scanning.

use std::fmt;
use std::io::{self, Write};

use crate::clause::Clause;
use crate::diag::{Diagnostics, Strictness};
use crate::literal::Literal;
use crate::tok::{self, IntIssue, Tokens};

/// A parsed CNF: the declared variable count and the clauses in file order
/// (implicitly numbered 1..m).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CnfDocument {
    pub num_vars_declared: u64,
    pub clauses: Vec<Clause>,
}

impl CnfDocument {
    pub fn new(num_vars_declared: u64, clauses: Vec<Clause>) -> CnfDocument {
        CnfDocument {
            num_vars_declared,
            clauses,
        }
    }

    /// Builds a document whose header declares exactly the variables used.
    pub fn from_clauses(clauses: Vec<Clause>) -> CnfDocument {
        let num_vars = clauses.iter().map(|c| c.max_var()).max().unwrap_or(0);
        CnfDocument {
            num_vars_declared: num_vars,
            clauses,
        }
    }

    /// Largest variable index actually used.
    pub fn max_var(&self) -> u64 {
        self.clauses.iter().map(|c| c.max_var()).max().unwrap_or(0)
    }

    pub fn write_dimacs(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "p cnf {} {}", self.num_vars_declared, self.clauses.len())?;
        for clause in &self.clauses {
            if clause.is_empty() {
                writeln!(out, "0")?;
            } else {
                writeln!(out, "{clause} 0")?;
            }
        }
        Ok(())
    }

    pub fn to_dimacs_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("DIMACS output is ASCII")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsErrorKind {
    #[error("MissingHeader: expected 'p cnf <vars> <clauses>'")]
    MissingHeader,
    #[error("LiteralAfterEof: last clause is not terminated by 0")]
    LiteralAfterEof,
    #[error("NonIntegerToken: {0:?}")]
    NonIntegerToken(String),
    #[error("IntegerOverflow: {0:?} does not fit in 64 bits")]
    IntegerOverflow(String),
    #[error(
        "HeaderMismatch: header declares {declared_vars} vars / {declared_clauses} clauses, \
         found max var {max_var} / {clauses} clauses"
    )]
    HeaderMismatch {
        declared_vars: u64,
        declared_clauses: u64,
        max_var: u64,
        clauses: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct DimacsError {
    pub line: u64,
    pub kind: DimacsErrorKind,
}

impl DimacsError {
    fn new(line: u64, kind: DimacsErrorKind) -> DimacsError {
        DimacsError { line, kind }
    }
}

fn int_error(line: u64, token: &[u8], issue: IntIssue) -> DimacsError {
    let kind = match issue {
        IntIssue::NonInteger => DimacsErrorKind::NonIntegerToken(tok::lossy(token)),
        IntIssue::Overflow => DimacsErrorKind::IntegerOverflow(tok::lossy(token)),
    };
    DimacsError::new(line, kind)
}

struct Header {
    vars: u64,
    clauses: u64,
}

fn parse_header(line_no: u64, line: &[u8]) -> Result<Header, DimacsError> {
    let mut toks = Tokens::new(line);
    let err = || DimacsError::new(line_no, DimacsErrorKind::MissingHeader);
    if toks.next() != Some(b"p") || toks.next() != Some(b"cnf") {
        return Err(err());
    }
    let mut field = || -> Result<u64, DimacsError> {
        let token = toks.next().ok_or_else(err)?;
        let value = tok::parse_i64(token).map_err(|issue| int_error(line_no, token, issue))?;
        u64::try_from(value).map_err(|_| err())
    };
    let vars = field()?;
    let clauses = field()?;
    if toks.next().is_some() {
        return Err(err());
    }
    Ok(Header { vars, clauses })
}

/// Parses a DIMACS CNF byte stream. In strict mode a header that disagrees
/// with the parsed contents (clause count differs, or a variable exceeds the
/// declared count) is an error; lenient mode records a warning instead.
pub fn parse_dimacs(
    input: &[u8],
    strictness: Strictness,
    diag: &mut Diagnostics,
) -> Result<CnfDocument, DimacsError> {
    let mut header: Option<Header> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut max_var: u64 = 0;
    let mut line_no: u64 = 0;
    let mut last_content_line: u64 = 0;

    for line in input.split(|&b| b == b'\n') {
        line_no += 1;
        let trimmed = line.iter().position(|&b| !tok::is_ws(b));
        let Some(start) = trimmed else { continue };
        if line[start] == b'c' {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line_no, line)?);
            continue;
        }
        last_content_line = line_no;
        for token in Tokens::new(line) {
            let value =
                tok::parse_i64(token).map_err(|issue| int_error(line_no, token, issue))?;
            if value == 0 {
                clauses.push(Clause::new(std::mem::take(&mut current)));
            } else {
                max_var = max_var.max(value.unsigned_abs());
                current.push(Literal::new(value));
            }
        }
    }

    let header = header.ok_or_else(|| DimacsError::new(line_no, DimacsErrorKind::MissingHeader))?;
    if !current.is_empty() {
        return Err(DimacsError::new(
            last_content_line,
            DimacsErrorKind::LiteralAfterEof,
        ));
    }
    if header.clauses != clauses.len() as u64 || max_var > header.vars {
        let kind = DimacsErrorKind::HeaderMismatch {
            declared_vars: header.vars,
            declared_clauses: header.clauses,
            max_var,
            clauses: clauses.len(),
        };
        if strictness.is_strict() {
            return Err(DimacsError::new(last_content_line.max(1), kind));
        }
        diag.warn(kind.to_string());
    }
    Ok(CnfDocument::new(header.vars, clauses))
}

impl fmt::Display for CnfDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dimacs_string())
    }
}
