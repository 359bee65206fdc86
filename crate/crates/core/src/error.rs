use thiserror::Error;

/// Every failure the library can report.
///
/// The variants fall into three families that the CLI maps onto exit codes:
/// parse failures, domain failures (the input violates a precondition), and
/// indeterminacy (a truncated Puiseux value is too short to decide a sign).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a non-positive element")]
    NotPositive,
    #[error("sign is indeterminate at the current truncation (raise --trunc)")]
    IndeterminateSign,
    #[error("exponent {0} cannot be evaluated exactly (denominator is not a power of two)")]
    UnsupportedExponent(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("characteristic polynomial does not split over the quadratic tower")]
    UnsolvableSpectrum,
    #[error("repeated eigenvalue")]
    RepeatedEigenvalue,
    #[error("leading-order spectrum is degenerate")]
    DegenerateLeadingSpectrum,
    #[error("unsupported root system type {0}")]
    UnsupportedType(String),
    #[error("not an element of SL_n: {0}")]
    NotInGroup(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("element is not in U_Theta")]
    NotInUTheta,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("root group parameter must be nonzero")]
    ZeroParameter,
    #[error("element is not in the image of the root SL2 embedding")]
    NotInImage,
    #[error("no Weyl group element relates the two a-parts")]
    NoRelatingElement,
    #[error("point lies within certification slack of the hull boundary")]
    PrecisionExhausted,
    #[error("entries must be rational")]
    NotRational,
    #[error("element is not in the closed Weyl chamber A+")]
    NotInChamber,
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by insufficient truncation depth.
    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Error::IndeterminateSign | Error::PrecisionExhausted)
    }
}
