use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative value at {0}")]
    NegativeValue(String),
    #[error("incoming weights of agent {agent} sum to {sum}, expected 1")]
    UnnormalizedWeights { agent: usize, sum: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires the network externalities model")]
    GeneralFormUnsupported,
    #[error("assignment is not a bijection between bundles and agents")]
    NotABijection,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("enumeration over {n}! assignments exceeds the cap of n <= {cap}")]
    EnumerationCapExceeded { n: usize, cap: usize },
    #[error("{n}^{m} candidate partitions exceed the search cap {cap}")]
    SearchCapExceeded { n: usize, m: usize, cap: u64 },
    #[error("epsilon must lie strictly between 0 and 1")]
    BadEpsilon,
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("cut-and-choose needs exactly two agents, got {0}")]
    WrongAgentCount(usize),
    #[error("internal invariant broken: {0}")]
    InvariantBroken(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
