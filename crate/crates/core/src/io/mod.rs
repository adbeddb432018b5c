//! Text formats and parsers for instances, protocols, partitions and
//! reports, plus graph export.
//!
//! All formats are line-oriented; `#` starts a comment. Exact rationals are
//! written `p/q` or as integers — decimal floats are rejected. Every parse
//! error names a line and column. Canonical emission is parse-stable:
//! `parse(emit(x))` equals `canonicalize(x)`.

mod instance;
mod partition_doc;
mod protocol_doc;

pub mod graph;
pub mod report;

pub use instance::{emit_instance, parse_instance, Instance};
pub use partition_doc::{emit_partition, parse_partition};
pub use protocol_doc::{emit_protocol, parse_protocol};

use std::fmt;

/// A located parse failure. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

pub(crate) fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        message: message.into(),
    }
}

/// One token with its 1-based column.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub col: usize,
    pub text: &'a str,
}

/// Tokenize one line: split on whitespace, strip `#` comments.
pub(crate) fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut col = 0;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if col < i {
                tokens.push(Token {
                    col: col + 1,
                    text: &line[col..i],
                });
            }
            col = i + c.len_utf8();
        }
    }
    if col < line.len() {
        tokens.push(Token {
            col: col + 1,
            text: &line[col..],
        });
    }
    tokens
}

/// Identifiers (bidder names, type labels, action labels, outcome labels,
/// node and infoset ids) exclude structural characters and the reserved `$`
/// prefix.
pub(crate) fn check_ident(line: usize, tok: Token<'_>) -> Result<String, ParseError> {
    let bad = ['@', '{', '}', '(', ')', ',', '=', '#', '>'];
    if tok.text.is_empty() || tok.text.contains(bad) || tok.text.starts_with('$') {
        return Err(err(
            line,
            tok.col,
            format!("invalid identifier {:?}", tok.text),
        ));
    }
    Ok(tok.text.to_string())
}

/// Parse and render outcome literals.
///
/// Compact form (omega/util blocks): `A@2` for an auction outcome, a bare
/// label otherwise. Verbose form (table/leaf lines): `win=A pay=2` or
/// `out=label`.
pub(crate) mod outcome_text {
    use super::{err, ParseError, Token};
    use crate::model::{format_rational, parse_rational, Outcome, TypeSpace};

    pub fn compact(o: &Outcome, space: &TypeSpace) -> String {
        match o {
            Outcome::Auction { winner, price } => {
                format!("{}@{}", space.bidder_name(*winner), format_rational(price))
            }
            Outcome::Labeled(l) => l.clone(),
        }
    }

    pub fn parse_compact(
        line: usize,
        tok: Token<'_>,
        space: &TypeSpace,
    ) -> Result<Outcome, ParseError> {
        if let Some((name, price)) = tok.text.split_once('@') {
            let winner = space
                .bidder_index(name)
                .ok_or_else(|| err(line, tok.col, format!("unknown bidder {name:?}")))?;
            let price = parse_rational(price)
                .ok_or_else(|| err(line, tok.col, format!("bad rational {price:?}")))?;
            Ok(Outcome::Auction { winner, price })
        } else {
            if tok.text.starts_with('$') {
                return Err(err(line, tok.col, "labels starting with '$' are reserved"));
            }
            Ok(Outcome::Labeled(tok.text.to_string()))
        }
    }

    pub fn verbose(o: &Outcome, space: &TypeSpace) -> String {
        o.display(space)
    }

    /// Parse `win=A pay=2` or `out=label` from a token slice.
    pub fn parse_verbose(
        line: usize,
        toks: &[Token<'_>],
        space: &TypeSpace,
    ) -> Result<Outcome, ParseError> {
        match toks {
            [one] if one.text.starts_with("out=") => {
                let label = &one.text[4..];
                if label.is_empty() || label.starts_with('$') {
                    return Err(err(line, one.col, "bad outcome label"));
                }
                Ok(Outcome::Labeled(label.to_string()))
            }
            [w, p] if w.text.starts_with("win=") && p.text.starts_with("pay=") => {
                let name = &w.text[4..];
                let winner = space
                    .bidder_index(name)
                    .ok_or_else(|| err(line, w.col, format!("unknown bidder {name:?}")))?;
                let price = parse_rational(&p.text[4..])
                    .ok_or_else(|| err(line, p.col, format!("bad rational in {:?}", p.text)))?;
                Ok(Outcome::Auction { winner, price })
            }
            _ => Err(err(
                line,
                toks.first().map(|t| t.col).unwrap_or(1),
                "expected `win=<bidder> pay=<rational>` or `out=<label>`",
            )),
        }
    }
}
