use thiserror::Error;

/// A number that failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}`: {reason}")]
pub struct ParseNumberError {
    pub input: String,
    pub reason: String,
}

impl ParseNumberError {
    pub fn new(input: &str, reason: impl Into<String>) -> Self {
        Self {
            input: input.to_owned(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("last signature coefficient b_n is zero")]
    ZeroTrailingCoefficient,
    #[error("recurrence order must be at least 1")]
    EmptySignature,
    #[error("signature has {signature} entries but {initial} initial conditions were given")]
    LengthMismatch { signature: usize, initial: usize },
    #[error("precision {0} bits is below the minimum of 53")]
    PrecisionTooLow(usize),
    #[error("root radii could not be separated below {cap} bits of precision")]
    PrecisionExhausted { cap: usize },
    #[error("basis matrix condition estimate {estimate:e} exceeds 2^{half_precision}")]
    IllConditioned { estimate: f64, half_precision: usize },
    #[error("ratio map argument has a zero component at position {0}")]
    ZeroComponent(usize),
    #[error("ratio map needs {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Parse(#[from] ParseNumberError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
