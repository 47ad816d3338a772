use thiserror::Error;

/// Failures raised by the numerical routines.
///
/// Variants map one-to-one onto the failure modes callers are expected to
/// branch on; anything else is reported as [`Error::InvalidArgument`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function has modulus {modulus:e} on the contour (guard {guard:e})")]
    ZeroOnContour { modulus: f64, guard: f64 },

    #[error("the zero function has no zero set to count")]
    NotRepresentable,

    #[error("function vanishes identically")]
    IdenticallyZero,

    #[error("determinant vanishes identically")]
    IdenticallyZeroDet,

    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(f64),

    #[error("n = {n} is not below the largest stored denominator {largest}")]
    InsufficientDepth { n: u64, largest: u64 },

    #[error("sin(2 pi j beta) vanishes at j = {0}; beta is rational")]
    DegenerateBeta(u64),

    #[error("potential is not real-valued on the torus (asymmetry {0:e})")]
    NotRealValued(f64),

    #[error("off-diagonal coefficient function c vanishes identically")]
    ZeroC,

    #[error("matrix product vanished exactly at phase {0}")]
    ExactSingularHit(f64),

    #[error("operation needs a rational frequency")]
    IrrationalFrequency,

    #[error("need at least {needed} usable denominators, have {have}")]
    InsufficientQ { needed: usize, have: usize },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
