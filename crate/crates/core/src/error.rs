use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("exhaustive search refused: {combinations} candidate plans exceed the cap of {cap}")]
    CapExceeded { combinations: f64, cap: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed dump: {0}")]
    Dump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable tag used in machine-readable CLI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Index { .. } => "index",
            Error::Numeric(_) => "numeric",
            Error::Infeasible(_) => "infeasible",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::Config(_) => "config",
            Error::Dump(_) => "dump",
            Error::Io(_) => "io",
        }
    }
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
