use thiserror::Error;

use crate::algebra::RelationType;
use crate::model::ConceptId;

/// A token that is not part of a closed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} `{token}`")]
pub struct UnknownToken {
    pub kind: &'static str,
    pub token: String,
}

impl UnknownToken {
    pub(crate) fn new(kind: &'static str, token: &str) -> Self {
        UnknownToken { kind, token: token.to_owned() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier `{0}`: expected [A-Za-z0-9_.-]+")]
pub struct InvalidId(pub String);

/// Errors raised by lookups and queries against a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KosError {
    #[error("no concept matches `{0}`")]
    NotFound(String),
    #[error("label `{reference}` is ambiguous: {}", join(candidates))]
    Ambiguous { reference: String, candidates: Vec<ConceptId> },
    #[error("relation type `{0}` cannot be used here")]
    BadRelType(RelationType),
    #[error("knowledge base has {0} validation error(s)")]
    InvalidKb(usize),
    #[error("document `{doc}` is indexed with unknown concept `{term}`")]
    UnknownTerm { doc: String, term: String },
}

impl KosError {
    /// Stable code used on the command line.
    pub fn code(&self) -> &'static str {
        match self {
            KosError::NotFound(_) => "E_NOT_FOUND",
            KosError::Ambiguous { .. } => "E_AMBIGUOUS",
            KosError::BadRelType(_) => "E_BAD_REL_TYPE",
            KosError::InvalidKb(_) => "E_INVALID_KB",
            KosError::UnknownTerm { .. } => "E_UNKNOWN_TERM",
        }
    }
}

fn join(ids: &[ConceptId]) -> String {
    ids.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", ")
}

/// Errors from the line-oriented file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
}

impl FormatError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        FormatError::Syntax { line, message: message.into() }
    }

    pub fn line(&self) -> usize {
        match self {
            FormatError::Syntax { line, .. } | FormatError::DuplicateId { line, .. } => *line,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Syntax { .. } => "E_FORMAT",
            FormatError::DuplicateId { .. } => "E_DUP_ID",
        }
    }
}

/// Query syntax error; `offset` is a 1-based byte offset into the query text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {offset}: {message}")]
pub struct QueryParseError {
    pub offset: usize,
    pub message: String,
}
