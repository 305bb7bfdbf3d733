use thiserror::Error;

/// Errors produced by the li-lab library.
#[derive(Debug, Error)]
pub enum LiLabError {
    #[error("invalid descriptor field `{field}`: {reason}")]
    InvalidDescriptor { field: String, reason: String },

    #[error("domain error in {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("ordinates out of order at line {line}: {current} does not exceed {previous}")]
    Ordering {
        line: usize,
        previous: String,
        current: String,
    },

    #[error("nonpositive ordinate at line {line}: {value}")]
    NonpositiveOrdinate { line: usize, value: String },

    #[error("invalid zero table: {0}")]
    InvalidTable(String),

    #[error("height {requested} exceeds table coverage {coverage}")]
    OutOfCoverage { requested: f64, coverage: f64 },

    #[error("zero table is empty")]
    EmptyTable,

    #[error("operation `{0}` is unsupported for descriptors without gamma factors")]
    UnsupportedDegreeZero(&'static str),

    #[error("degenerate Laurent data: leading coefficient is zero")]
    DegenerateLaurent,

    #[error("invalid Laurent data: {0}")]
    InvalidLaurent(String),

    #[error("need {needed} coefficients, only {available} available")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("off-line zero set is not closed under rho -> 1 - conj(rho): missing partner of ({sigma}, {gamma})")]
    SymmetryViolation { sigma: f64, gamma: f64 },

    #[error("invalid zero source: {0}")]
    InvalidSource(String),

    #[error("network error: {0}")]
    Network(String),

    #[error("label not found: {0}")]
    LabelNotFound(String),

    #[error("malformed response: {0}")]
    MalformedResponse(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LiLabError>;

impl LiLabError {
    pub(crate) fn descriptor(field: impl Into<String>, reason: impl Into<String>) -> Self {
        LiLabError::InvalidDescriptor {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        LiLabError::Domain {
            function,
            reason: reason.into(),
        }
    }

    /// Whether the failure is transient and the operation may be retried.
    pub fn is_retryable(&self) -> bool {
        matches!(self, LiLabError::Network(_))
    }
}
