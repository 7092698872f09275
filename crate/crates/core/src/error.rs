use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not a supported prime (2 <= p <= 2^31-1)")]
    InvalidCharacteristic(u64),
    #[error("operands live in different ring contexts")]
    ContextMismatch,
    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("ideal is not primary to the homogeneous maximal ideal")]
    NotMPrimary,
    #[error("ill-posed request: {0}")]
    IllPosed(String),
    #[error("context is not a hypersurface (needs exactly one defining polynomial)")]
    NotHypersurface,
    #[error("hypothesis fails at generator {index}: {detail}")]
    HypothesisFails { index: usize, detail: String },
    #[error("certificate verification failed: {0}")]
    VerificationFailed(String),
    #[error("not stabilized within e_max = {e_max}")]
    NotStabilized { e_max: u32 },
    #[error("invalid test element: {0}")]
    InvalidTestElement(String),
    #[error("fixture error: {0}")]
    Fixture(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}
