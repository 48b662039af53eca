use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("symbol vanishes on the unit circle (min |phi| = {min_abs:e} at node {node})")]
    ZeroOnCircle { min_abs: f64, node: usize },
    #[error("symbol has no nonzero coefficients")]
    EmptyCoefficients,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed symbol descriptor: {0}")]
    Descriptor(String),
    #[error("Fourier index {index} outside resolution {resolution}")]
    IndexOutOfResolution { index: i64, resolution: usize },
    #[error("Fourier coefficients not resolved at the maximum FFT size {0}")]
    Unresolved(usize),
    #[error("winding number unreliable (phase defect {confidence:.3} rad at resolution {resolution})")]
    UnreliableWinding { confidence: f64, resolution: usize },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("prefactor too close to singular: |{what}| = {value:e}")]
    NearSingularPrefactor { what: &'static str, value: f64 },
    #[error("weight denominator too close to zero: |1 + s_k - s_j| = {0:e}")]
    SingularWeight(f64),
    #[error("probability {value} outside [0, 1] beyond tolerance {tol:e}")]
    OutOfRange { value: f64, tol: f64 },
    #[error("summation window [{lo}, {hi}] captures only mass {mass}")]
    WindowTooSmall { lo: i64, hi: i64, mass: f64 },
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("colored statistic disagreement at k={k}: exhaustive {exhaustive} vs formula {formula}")]
    Disagreement { k: usize, exhaustive: i64, formula: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
