use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has no leader (it involves parameters only)")]
    NoLeader,
    #[error("indeterminate `{0}` is not part of the ranking")]
    UnknownIndeterminate(String),
    #[error("inconsistent system: derived the nonzero parameter-only polynomial {0}")]
    InconsistentSystem(String),
    #[error("model `{model}` has no `{regime}` variant")]
    UnsupportedCell { model: String, regime: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared symbol `{name}` at line {line}, column {column}")]
    UndeclaredSymbol { name: String, line: usize, column: usize },
    #[error("duplicate entry `{0}`")]
    DuplicateEntry(String),
    #[error("grid needs at least 8 points per axis, got {0}")]
    GridTooCoarse(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
