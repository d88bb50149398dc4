use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkError {
    #[error("division by an expression whose canonical form is zero")]
    DivisionByZero,
    #[error("evaluation pole: denominator vanishes at the requested point")]
    EvaluationPole,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("chart mismatch")]
    ChartMismatch,
    #[error("singular affine map")]
    SingularMap,
    #[error("affine substitution not representable: {0}")]
    UnsupportedSubstitution(String),
    #[error("b-field is not closed")]
    NotClosed,
    #[error("beta-field has covector components")]
    NotBivector,
    #[error("spinor vanishes at the requested point")]
    ZeroSpinor,
    #[error("2-form is degenerate")]
    DegenerateOmega,
    #[error("eta/N decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("eigenspace dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("element is not in the (2,0)+(0,2) part")]
    WrongBidegree,
    #[error("spinor volume vanishes")]
    VanishingVolume,
    #[error("extraction residue in degree {0}")]
    ExtractionResidue(usize),
    #[error("integrand is not exactly integrable: {0}")]
    NotExactlyIntegrable(String),
    #[error("no exact value at the sample point")]
    NoExactValue,
    #[error("function is not mean-zero")]
    NotMeanZero,
    #[error("finite-difference step too small")]
    StepTooSmall,
    #[error("scene error at {field}: {msg}")]
    Scene { field: String, msg: String },
}

pub type GkResult<T> = Result<T, GkError>;

impl GkError {
    pub fn scene(field: impl Into<String>, msg: impl Into<String>) -> Self {
        GkError::Scene { field: field.into(), msg: msg.into() }
    }
}
