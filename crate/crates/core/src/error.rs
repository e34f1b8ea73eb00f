use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("unsupported fragment: {0}")]
    UnsupportedFragment(String),

    #[error("pose ({x}, {y}) is out of bounds")]
    OutOfBounds { x: f64, y: f64 },

    #[error("oracle limit: word of length {len} exceeds {max} letters")]
    OracleLimit { len: usize, max: usize },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid rulebook: {0}")]
    InvalidRulebook(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
