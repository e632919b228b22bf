use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("relation on line {line} is not homogeneous ({lhs} letters vs {rhs})")]
    NonHomogeneous { line: usize, lhs: usize, rhs: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("presentation has no generators")]
    EmptyAlphabet,

    #[error("{0} generators exceed the supported maximum of 255")]
    TooManyGenerators(usize),

    #[error("equivalence class exceeds the ceiling of {ceiling} members")]
    CeilingExceeded { ceiling: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
