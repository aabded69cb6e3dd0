use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("too many tests: {count} declared, cap is {cap}")]
    TooManyTests { count: usize, cap: usize },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("empty name")]
    EmptyName,

    #[error("`{0}` is declared both as a test and as an action")]
    NameCollision(String),

    #[error("{0} must be nonempty")]
    EmptyDeclaration(&'static str),

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared identifier `{name}` at {line}:{column}")]
    Undeclared {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("duplicate atom {0} in guarded sum")]
    DuplicateAtom(u32),

    #[error("state index {index} out of range (automaton has {n_states} states)")]
    StateOutOfRange { index: usize, n_states: usize },

    #[error("build trace does not match the coalgebra: {0}")]
    TraceMismatch(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid interpretation: {0}")]
    InvalidInterp(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
