use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the library.
///
/// The variants split into two families that the CLI maps to different exit
/// codes: validation failures (malformed input) and degenerate inputs (valid
/// input for which the requested construction does not exist).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("matrix is not Hermitian: entry ({row}, {col}) off by {residual:e}")]
    NotHermitian { row: usize, col: usize, residual: f64 },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("states are not orthogonal: overlap modulus {0:e}")]
    NotOrthogonal(f64),

    #[error("expectation value has imaginary residual {0:e}")]
    NonRealExpectation(f64),

    #[error("invalid spin j = {0}/2")]
    InvalidSpin(u32),

    #[error("state is an eigenstate of the observable; no orthogonal deviation exists")]
    EigenstateNoPerp,

    #[error("projection onto the orthogonal complement is null")]
    NullProjection,

    #[error("state is a joint eigenstate of both observables")]
    JointEigenstate,

    #[error("variance of an observable vanishes on the state")]
    ZeroVariance,

    #[error("amended product bound denominator is degenerate ({0:e})")]
    DegenerateDenominator(f64),

    #[error("orthogonal state is not orthogonal to the support of rho (residual {0:e})")]
    PerpNotOrthogonalToSupport(f64),

    #[error("no state orthogonal to the support of rho exists")]
    NoValidPerp,

    #[error("states coincide up to phase")]
    StatesCoincide,

    #[error("states are orthogonal")]
    StatesOrthogonal,

    #[error("degenerate Ginibre draw (|r_ii| = {0:e})")]
    DegenerateDraw(f64),

    #[error("random orthogonal state construction failed after {0} attempts")]
    RandomPerpFailed(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Variant name, used as the machine-readable reason by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidDimension(_) => "InvalidDimension",
            Error::NonFinite(_) => "NonFinite",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotNormalized(_) => "NotNormalized",
            Error::BadTrace(_) => "BadTrace",
            Error::NotPositive(_) => "NotPositive",
            Error::NotOrthogonal(_) => "NotOrthogonal",
            Error::NonRealExpectation(_) => "NonRealExpectation",
            Error::InvalidSpin(_) => "InvalidSpin",
            Error::EigenstateNoPerp => "EigenstateNoPerp",
            Error::NullProjection => "NullProjection",
            Error::JointEigenstate => "JointEigenstate",
            Error::ZeroVariance => "ZeroVariance",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
            Error::PerpNotOrthogonalToSupport(_) => "PerpNotOrthogonalToSupport",
            Error::NoValidPerp => "NoValidPerp",
            Error::StatesCoincide => "StatesCoincide",
            Error::StatesOrthogonal => "StatesOrthogonal",
            Error::DegenerateDraw(_) => "DegenerateDraw",
            Error::RandomPerpFailed(_) => "RandomPerpFailed",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// True for errors caused by malformed input rather than by a valid
    /// input on which the requested construction does not exist.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::InvalidDimension(_)
                | Error::NonFinite(_)
                | Error::NotHermitian { .. }
                | Error::NotNormalized(_)
                | Error::BadTrace(_)
                | Error::NotPositive(_)
                | Error::NotOrthogonal(_)
                | Error::NonRealExpectation(_)
                | Error::InvalidSpin(_)
                | Error::PerpNotOrthogonalToSupport(_)
                | Error::InvalidArgument(_)
        )
    }
}
