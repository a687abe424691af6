use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not invertible modulo p")]
    NotInvertible,
    #[error("quotient exponent reaches the coefficient modulus p^{0}; no headroom left")]
    ExponentTooSmall(u32),
    #[error("parameters too large: {0}")]
    ParameterTooLarge(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("resource limit exceeded: more than {limit} elements")]
    ResourceLimit { limit: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("the central element is a p-th power")]
    PthPowerViolation,
    #[error("element is not central")]
    NotCentral,
    #[error("element has order {0}, expected p")]
    WrongOrder(u64),
    #[error("element does not lie in the group")]
    NotInGroup,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    /// Short machine-readable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotInvertible => "NotInvertible",
            Error::ExponentTooSmall(_) => "ExponentTooSmall",
            Error::ParameterTooLarge(_) => "ParameterTooLarge",
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::NotNormal => "NotNormal",
            Error::BadParameters(_) => "BadParameters",
            Error::PthPowerViolation => "PthPowerViolation",
            Error::NotCentral => "NotCentral",
            Error::WrongOrder(_) => "WrongOrder",
            Error::NotInGroup => "NotInGroup",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::Parse(_) => "ParseError",
            Error::Dimension(_) => "Dimension",
        }
    }
}
