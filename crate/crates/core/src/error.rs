use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Doubled quantum numbers must be nonnegative where spins are concerned.
    #[error("invalid quantum number: {0}")]
    InvalidQuantumNumber(String),

    /// Matrix/vector dimensions do not agree with each other or with the spin.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Input that must be Hermitian is not, within the configured tolerance.
    #[error("operator is not Hermitian (residual {residual:.3e} > tol {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },

    /// Input that must be a density matrix fails trace or positivity checks.
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    /// The brute-force oracle only handles 2s <= 12.
    #[error("spin too large for the tensor-embedding oracle: 2s = {two_s} > 12")]
    SpinTooLargeForOracle { two_s: u32 },

    /// A polynomial with all coefficients zero has no root set.
    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,

    /// No antipodally-symmetric matching of the stars exists within tolerance.
    /// Signals non-Hermitian input or root-finder breakdown.
    #[error("antipodal pairing failed (residual {residual:.3e} rad > tol {tol:.3e})")]
    PairingFailed { residual: f64, tol: f64 },

    /// The candidate class vector does not reproduce the block vector up to sign.
    #[error("class extraction failed: |<v,u>| = {overlap:.12} not within {tol:.3e} of 1")]
    ClassExtractionFailed { overlap: f64, tol: f64 },

    /// Catch-all for invalid arguments (out-of-range sigma/mu, bad state names, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An eigenvalue/root-finding routine did not converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
