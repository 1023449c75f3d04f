//! Shared helpers for the line-oriented text formats.

use thiserror::Error;

use crate::digraph::{DigraphError, Level};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `mode` line")]
    MissingMode,
    #[error(transparent)]
    Structure(#[from] DigraphError),
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { line, message: message.into() }
    }
}

/// Yields `(1-based line number, tokens)` for every non-blank line with
/// `#` comments removed.
pub(crate) fn tokenized_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub(crate) fn parse_level(line: usize, token: &str) -> Result<Level, ParseError> {
    token
        .parse::<Level>()
        .map_err(|_| ParseError::at(line, format!("invalid level `{token}` (expected an integer or p/q)")))
}

pub(crate) fn expect_arity(line: usize, tokens: &[&str], n: usize, usage: &str) -> Result<(), ParseError> {
    if tokens.len() == n {
        Ok(())
    } else {
        Err(ParseError::at(line, format!("expected `{usage}`")))
    }
}
