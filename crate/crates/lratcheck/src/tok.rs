//! Byte-level tokenizing shared by the DIMACS and LRAT parsers.
//!
//! Both formats are whitespace-separated ASCII integers; `\r` counts as
//! whitespace so CRLF files parse unchanged.

pub(crate) fn is_ws(byte: u8) -> bool {
    matches!(byte, b' ' | b'\t' | b'\r' | b'\n')
}

/// Iterator over the whitespace-separated tokens of a byte slice.
pub(crate) struct Tokens<'a> {
    rest: &'a [u8],
}

impl<'a> Tokens<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Tokens<'a> {
        Tokens { rest: bytes }
    }
}

impl<'a> Iterator for Tokens<'a> {
    type Item = &'a [u8];

    fn next(&mut self) -> Option<&'a [u8]> {
        let start = self.rest.iter().position(|&b| !is_ws(b))?;
        let rest = &self.rest[start..];
        let end = rest.iter().position(|&b| is_ws(b)).unwrap_or(rest.len());
        self.rest = &rest[end..];
        Some(&rest[..end])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IntIssue {
    NonInteger,
    Overflow,
}

/// Parses a signed decimal token into an i64. Overflow is an error, never a
/// wraparound.
pub(crate) fn parse_i64(token: &[u8]) -> Result<i64, IntIssue> {
    let (negative, digits) = match token {
        [b'-', rest @ ..] => (true, rest),
        rest => (false, rest),
    };
    if digits.is_empty() {
        return Err(IntIssue::NonInteger);
    }
    let mut value: i64 = 0;
    for &byte in digits {
        if !byte.is_ascii_digit() {
            return Err(IntIssue::NonInteger);
        }
        value = value
            .checked_mul(10)
            .and_then(|v| {
                let digit = i64::from(byte - b'0');
                if negative {
                    v.checked_sub(digit)
                } else {
                    v.checked_add(digit)
                }
            })
            .ok_or(IntIssue::Overflow)?;
    }
    Ok(value)
}

pub(crate) fn lossy(token: &[u8]) -> String {
    String::from_utf8_lossy(token).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_split_on_mixed_whitespace() {
        let toks: Vec<&[u8]> = Tokens::new(b"  1\t-2 \r\n3 ").collect();
        assert_eq!(toks, vec![&b"1"[..], b"-2", b"3"]);
        assert_eq!(Tokens::new(b" \t ").count(), 0);
    }

    #[test]
    fn parse_i64_bounds() {
        assert_eq!(parse_i64(b"0"), Ok(0));
        assert_eq!(parse_i64(b"-42"), Ok(-42));
        assert_eq!(parse_i64(b"9223372036854775807"), Ok(i64::MAX));
        assert_eq!(parse_i64(b"-9223372036854775808"), Ok(i64::MIN));
        assert_eq!(parse_i64(b"9223372036854775808"), Err(IntIssue::Overflow));
        assert_eq!(parse_i64(b"12x"), Err(IntIssue::NonInteger));
        assert_eq!(parse_i64(b"-"), Err(IntIssue::NonInteger));
    }
}
