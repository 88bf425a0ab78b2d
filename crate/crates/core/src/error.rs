use thiserror::Error;

/// Which of a gate's two inputs a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pin {
    A,
    B,
}

impl std::fmt::Display for Pin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pin::A => f.write_str("a"),
            Pin::B => f.write_str("b"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    /// A gate input points at a source that is not strictly upstream of it.
    #[error("gate {gate} input {pin}: {reason}")]
    Structure {
        gate: usize,
        pin: Pin,
        reason: String,
    },

    #[error("genome must have at least one {0}")]
    Empty(&'static str),

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid truth table: {0}")]
    TruthTable(String),

    #[error("invalid target {0:?}: expected one of and|or|nor|xor|xnor|nand or tt:<bits>")]
    Target(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Malformed JSON document; position is 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("experiment entry {entry}: {source}")]
    Entry {
        entry: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        let message = err.to_string();
        // serde_json appends " at line L column C"; keep the bare message.
        let message = match message.rfind(" at line ") {
            Some(idx) => message[..idx].to_string(),
            None => message,
        };
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message,
        }
    }
}
