use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported modulus {0}")]
    UnsupportedModulus(u32),

    #[error("code is not self-dual")]
    NotSelfDual,

    #[error("lattice is not unimodular")]
    NotUnimodular,

    #[error("lattice is even: the parity map is trivial")]
    EvenLattice,

    #[error("singular basis")]
    Singular,

    #[error("inconsistent weight enumerator: {0}")]
    InconsistentEnumerator(String),

    #[error("over-constrained: {0}")]
    OverConstrained(String),

    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown instance `{0}`")]
    UnknownInstance(String),

    #[error("value does not fit the fixed-width representation: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
