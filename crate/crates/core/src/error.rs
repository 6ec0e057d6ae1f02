use std::io;

use thiserror::Error;

/// Errors raised anywhere in the translate → prune → materialize → query pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("CSV error at row {row}: {message}")]
    Csv { row: u64, message: String },

    #[error("Turtle syntax error at line {line}, column {column}: {message}")]
    Turtle {
        line: u64,
        column: u64,
        message: String,
    },

    #[error("N-Triples syntax error at line {line}: {message}")]
    NTriples { line: u64, message: String },

    #[error("SPARQL syntax error at line {line}, column {column}: {message}")]
    Sparql {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid RML mapping: {0}")]
    Rml(String),

    #[error("invalid IRI <{0}>")]
    InvalidIri(String),

    #[error("invalid term: {0}")]
    InvalidTerm(String),

    /// A violated structural precondition of the mapping algebra.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("source assignment is not a valid input: {0}")]
    InvalidInput(String),

    #[error("unknown iterator query {0:?} for CSV sources (expected \"rows\")")]
    UnknownIterator(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
