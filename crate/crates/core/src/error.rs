use thiserror::Error;

/// Errors raised by series arithmetic, expression handling and the labs built on top.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("leading coefficient is not a unit in {ring}")]
    NonUnitLeadingCoefficient { ring: String },

    #[error("coefficient at index {index} is not an integer")]
    NonIntegralCoefficient { index: usize },

    #[error("coefficient at index {index} is not divisible by {divisor}")]
    NotDivisible { index: usize, divisor: String },

    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid modulus {0} (expected 2 <= M <= 2^32)")]
    InvalidModulus(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {position}: expected {}", expected.join(" | "))]
    Parse { position: usize, expected: Vec<String> },

    #[error("evaluation of `{source_text}` (bytes {start}..{end}) failed: {cause}")]
    Eval { start: usize, end: usize, source_text: String, cause: Box<Error> },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("cross-check mismatch at n={n}: {detail}")]
    CrossCheckMismatch { n: usize, detail: String },

    #[error("corpus error at line {line}: {message}")]
    Corpus { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// The innermost cause, looking through evaluation wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Eval { cause, .. } => cause.root(),
            other => other,
        }
    }

    /// Short machine-readable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::RingMismatch { .. } => "RingMismatch",
            Error::NonUnitLeadingCoefficient { .. } => "NonUnitLeadingCoefficient",
            Error::NonIntegralCoefficient { .. } => "NonIntegralCoefficient",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::ResourceLimit(_) => "ResourceLimit",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "ParseError",
            Error::Eval { .. } => unreachable!(),
            Error::UnknownIdentity(_) => "UnknownIdentity",
            Error::CrossCheckMismatch { .. } => "CrossCheckMismatch",
            Error::Corpus { .. } => "CorpusError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
