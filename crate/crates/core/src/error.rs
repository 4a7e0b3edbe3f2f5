use thiserror::Error;

/// Errors raised by the library. Every variant has a stable numeric code,
/// shared with the CLI report and the C ABI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cone contains a line")]
    NonPointedCone,
    #[error("not a face of the monoid")]
    NotAFace,
    #[error("element {0} is not in the monoid")]
    ElementNotInMonoid(String),
    #[error("denominator {denom} does not divide exponent {exponent}")]
    DenominatorMismatch { denom: u64, exponent: u64 },
    #[error("Kummer ideal has a smooth part; enlarge the structure first")]
    NonMonomialKummerIdeal,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("no single subgroup restricts to the toroidal stabilizers at every point (witness: {0})")]
    NoUniformToroidalSubgroup(String),
    #[error("center is not permissible on this chart: {0}")]
    NotPermissible(String),
    #[error("strict transform not stabilized at n={n}, m={m}")]
    NotStabilized { n: u64, m: u64 },
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("computation exceeds size guard: {0}")]
    TooLarge(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
}

impl Error {
    /// Stable error code.
    pub fn code(&self) -> i32 {
        match self {
            Error::NonPointedCone => 10,
            Error::NotAFace => 11,
            Error::ElementNotInMonoid(_) => 12,
            Error::DenominatorMismatch { .. } => 13,
            Error::NonMonomialKummerIdeal => 14,
            Error::InvalidPoint(_) => 15,
            Error::NoUniformToroidalSubgroup(_) => 16,
            Error::NotPermissible(_) => 17,
            Error::NotStabilized { .. } => 18,
            Error::UnsupportedAction(_) => 19,
            Error::InvalidInput(_) => 20,
            Error::TooLarge(_) => 21,
            Error::InvariantViolated(_) => 22,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPointedCone => "NonPointedCone",
            Error::NotAFace => "NotAFace",
            Error::ElementNotInMonoid(_) => "ElementNotInMonoid",
            Error::DenominatorMismatch { .. } => "DenominatorMismatch",
            Error::NonMonomialKummerIdeal => "NonMonomialKummerIdeal",
            Error::InvalidPoint(_) => "InvalidPoint",
            Error::NoUniformToroidalSubgroup(_) => "NoUniformToroidalSubgroup",
            Error::NotPermissible(_) => "NotPermissible",
            Error::NotStabilized { .. } => "NotStabilized",
            Error::UnsupportedAction(_) => "UnsupportedAction",
            Error::InvalidInput(_) => "InvalidInput",
            Error::TooLarge(_) => "TooLarge",
            Error::InvariantViolated(_) => "InvariantViolated",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
