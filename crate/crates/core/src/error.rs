use thiserror::Error;

use crate::number::QExponent;

/// Domain errors raised while building or combining q-series.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series is identically zero to its precision")]
    ZeroSeries,
    #[error("exponent {exponent} is at or beyond the series precision {precision}")]
    BeyondPrecision { exponent: Box<QExponent>, precision: Box<QExponent> },
    #[error("substitution power must be positive, got {0}")]
    NonPositivePower(QExponent),
    #[error("pole: 1/(1 - q^0) has no expansion")]
    PoleAtOne,
    #[error("infinite product does not converge q-adically")]
    DivergentProduct,
    #[error("base must have positive q-exponent, got {0}")]
    NonPositiveBase(QExponent),
    #[error("expansion of an exact non-monomial series needs a truncation order")]
    InfiniteExpansion,
    #[error("degenerate z: z or x*z is an integral power of the base")]
    DegenerateZ,
    #[error("degenerate x: a Pochhammer factor vanishes")]
    DegenerateX,
    #[error("a theta function in a denominator vanishes to working precision")]
    DegenerateDenominator,
    #[error("divisibility violated: {0}")]
    DivisibilityViolation(String),
    #[error("substitution q -> -q needs integral exponents, found {0}")]
    FractionalExponent(QExponent),
    #[error("could not reach precision {wanted}; best achieved {achieved}")]
    InsufficientPrecision { wanted: Box<QExponent>, achieved: Box<QExponent> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Variant name, e.g. `DegenerateZ`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroSeries => "ZeroSeries",
            Error::BeyondPrecision { .. } => "BeyondPrecision",
            Error::NonPositivePower(_) => "NonPositivePower",
            Error::PoleAtOne => "PoleAtOne",
            Error::DivergentProduct => "DivergentProduct",
            Error::NonPositiveBase(_) => "NonPositiveBase",
            Error::InfiniteExpansion => "InfiniteExpansion",
            Error::DegenerateZ => "DegenerateZ",
            Error::DegenerateX => "DegenerateX",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::DivisibilityViolation(_) => "DivisibilityViolation",
            Error::FractionalExponent(_) => "FractionalExponent",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
