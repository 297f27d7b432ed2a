//! Streaming parser for LRAT proof files.
//!
//! Grammar, per line: an addition is `<id> <lit>* 0 <hint>* 0` where the
//! hints are positive clause ids, with each negative id `-i` opening a RAT
//! resolution group for candidate `i`; a deletion is `<id> d <id>* 0`. The
//! token right after the leading id disambiguates the two. Both 0s of an
//! addition are mandatory, and tabs, spaces, and carriage returns are
//! interchangeable whitespace.
//!
//! The stream never materializes the whole proof; memory is bounded by the
//! longest line.

use std::io::BufRead;

use crate::clause::{Addition, Clause, ClauseIssue, Deletion, HintStructure, ProofLine, RatGroup};
use crate::diag::Strictness;
use crate::literal::{ClauseId, Literal};
use crate::tok::{self, IntIssue, Tokens};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LratErrorKind {
    #[error("MissingTerminator: line ends before its terminating 0")]
    MissingTerminator,
    #[error("ZeroId: 0 cannot be used as a clause identifier")]
    ZeroId,
    #[error("NegativeIdInDeletion: deletion target {0} is negative")]
    NegativeIdInDeletion(i64),
    #[error("UnsortedCandidates: candidate {found} does not increase over {prev}")]
    UnsortedCandidates { prev: u64, found: u64 },
    #[error("UnsortedClause: literal over variable {0} breaks the sorted tail")]
    UnsortedClause(u64),
    #[error("DuplicateOrComplementaryLiteral: variable {0} occurs twice in the clause")]
    DuplicateOrComplementaryLiteral(u64),
    #[error("DecreasingId: leading id {found} is below the preceding line id {prev}")]
    DecreasingId { prev: u64, found: u64 },
    #[error("TrailingTokens: unexpected {0:?} after the terminating 0")]
    TrailingTokens(String),
    #[error("InvalidToken: {0:?}")]
    InvalidToken(String),
    #[error("IntegerOverflow: {0:?} does not fit in 64 bits")]
    IntegerOverflow(String),
    #[error("Io: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("proof line {line}: {kind}")]
pub struct LratError {
    /// Physical line number in the proof file, 1-based.
    pub line: u64,
    pub kind: LratErrorKind,
}

enum Token {
    Int(i64),
    Delete,
}

fn next_token(toks: &mut Tokens<'_>) -> Result<Option<Token>, LratErrorKind> {
    let Some(raw) = toks.next() else {
        return Ok(None);
    };
    if raw == b"d" {
        return Ok(Some(Token::Delete));
    }
    match tok::parse_i64(raw) {
        Ok(value) => Ok(Some(Token::Int(value))),
        Err(IntIssue::NonInteger) => Err(LratErrorKind::InvalidToken(tok::lossy(raw))),
        Err(IntIssue::Overflow) => Err(LratErrorKind::IntegerOverflow(tok::lossy(raw))),
    }
}

/// Requires the remainder of the line to be empty.
fn expect_end(toks: &mut Tokens<'_>) -> Result<(), LratErrorKind> {
    match toks.next() {
        None => Ok(()),
        Some(raw) => Err(LratErrorKind::TrailingTokens(tok::lossy(raw))),
    }
}

fn parse_deletion(id: ClauseId, toks: &mut Tokens<'_>) -> Result<ProofLine, LratErrorKind> {
    let mut targets = Vec::new();
    loop {
        match next_token(toks)? {
            Some(Token::Int(0)) => break,
            Some(Token::Int(v)) if v > 0 => targets.push(ClauseId::new(v as u64)),
            Some(Token::Int(v)) => return Err(LratErrorKind::NegativeIdInDeletion(v)),
            Some(Token::Delete) => return Err(LratErrorKind::InvalidToken("d".into())),
            None => return Err(LratErrorKind::MissingTerminator),
        }
    }
    expect_end(toks)?;
    Ok(ProofLine::Deletion(Deletion { id, targets }))
}

fn parse_addition(
    id: ClauseId,
    first: i64,
    toks: &mut Tokens<'_>,
    strictness: Strictness,
) -> Result<ProofLine, LratErrorKind> {
    let mut literals = Vec::new();
    let mut next = first;
    loop {
        match next {
            0 => break,
            v => literals.push(Literal::new(v)),
        }
        next = match next_token(toks)? {
            Some(Token::Int(v)) => v,
            Some(Token::Delete) => return Err(LratErrorKind::InvalidToken("d".into())),
            None => return Err(LratErrorKind::MissingTerminator),
        };
    }
    let clause = Clause::new(literals);
    clause.validate_for_proof(strictness).map_err(|issue| match issue {
        ClauseIssue::DuplicateOrComplementary { variable } => {
            LratErrorKind::DuplicateOrComplementaryLiteral(variable)
        }
        ClauseIssue::UnsortedTail { variable } => LratErrorKind::UnsortedClause(variable),
    })?;

    let mut hints = HintStructure::default();
    loop {
        match next_token(toks)? {
            Some(Token::Int(0)) => break,
            Some(Token::Int(v)) if v > 0 => {
                let hint = ClauseId::new(v as u64);
                match hints.groups.last_mut() {
                    Some(group) => group.units.push(hint),
                    None => hints.prefix.push(hint),
                }
            }
            Some(Token::Int(v)) => {
                let candidate = ClauseId::new(v.unsigned_abs());
                if strictness.is_strict() {
                    if let Some(prev) = hints.groups.last() {
                        if prev.candidate >= candidate {
                            return Err(LratErrorKind::UnsortedCandidates {
                                prev: prev.candidate.get(),
                                found: candidate.get(),
                            });
                        }
                    }
                }
                hints.groups.push(RatGroup {
                    candidate,
                    units: Vec::new(),
                });
            }
            Some(Token::Delete) => return Err(LratErrorKind::InvalidToken("d".into())),
            None => return Err(LratErrorKind::MissingTerminator),
        }
    }
    expect_end(toks)?;
    Ok(ProofLine::Addition(Addition { id, clause, hints }))
}

fn parse_line_bytes(line: &[u8], strictness: Strictness) -> Result<ProofLine, LratErrorKind> {
    let mut toks = Tokens::new(line);
    let id = match next_token(&mut toks)? {
        Some(Token::Int(v)) if v > 0 => ClauseId::new(v as u64),
        Some(Token::Int(0)) => return Err(LratErrorKind::ZeroId),
        Some(Token::Int(v)) => return Err(LratErrorKind::InvalidToken(v.to_string())),
        Some(Token::Delete) => return Err(LratErrorKind::InvalidToken("d".into())),
        None => return Err(LratErrorKind::MissingTerminator),
    };
    match next_token(&mut toks)? {
        Some(Token::Delete) => parse_deletion(id, &mut toks),
        Some(Token::Int(v)) => parse_addition(id, v, &mut toks, strictness),
        None => Err(LratErrorKind::MissingTerminator),
    }
}

/// Parses one proof line. Exposed for tests and for callers that already
/// split their input; whole files go through [`ProofStream`].
pub fn parse_proof_line(line: &str, strictness: Strictness) -> Result<ProofLine, LratErrorKind> {
    parse_line_bytes(line.as_bytes(), strictness)
}

/// Streaming reader yielding proof lines in file order, with the physical
/// line number of each. In strict mode the leading ids must be nondecreasing
/// across the stream. After the first error the stream is exhausted.
pub struct ProofStream<R> {
    reader: R,
    strictness: Strictness,
    buf: Vec<u8>,
    line_no: u64,
    last_leading_id: u64,
    done: bool,
}

impl<R: BufRead> ProofStream<R> {
    pub fn new(reader: R, strictness: Strictness) -> ProofStream<R> {
        ProofStream {
            reader,
            strictness,
            buf: Vec::new(),
            line_no: 0,
            last_leading_id: 0,
            done: false,
        }
    }

    /// Leading id of the last line yielded.
    pub fn last_leading_id(&self) -> u64 {
        self.last_leading_id
    }

    fn fail(&mut self, kind: LratErrorKind) -> Option<Result<(u64, ProofLine), LratError>> {
        self.done = true;
        Some(Err(LratError {
            line: self.line_no,
            kind,
        }))
    }
}

impl<R: BufRead> Iterator for ProofStream<R> {
    type Item = Result<(u64, ProofLine), LratError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return self.fail(LratErrorKind::Io(e.to_string())),
            }
            self.line_no += 1;
            if self.buf.iter().all(|&b| tok::is_ws(b)) {
                continue;
            }
            return match parse_line_bytes(&self.buf, self.strictness) {
                Ok(line) => {
                    let id = line.leading_id().get();
                    if self.strictness.is_strict() && id < self.last_leading_id {
                        return self.fail(LratErrorKind::DecreasingId {
                            prev: self.last_leading_id,
                            found: id,
                        });
                    }
                    self.last_leading_id = id;
                    Some(Ok((self.line_no, line)))
                }
                Err(kind) => self.fail(kind),
            };
        }
    }
}
