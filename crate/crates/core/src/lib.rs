//! Stellar (Majorana) representation of mixed spin states.
//!
//! The crate connects three equivalent descriptions of a spin-s Hermitian
//! operator and converts freely between them:
//!
//! - the dense matrix in the |s,m> basis ([`spin::HermitianOp`]),
//! - a bihomogeneous degree-(N, N) polynomial in two complex variables and
//!   their conjugates ([`polynomial::MajoranaPoly`], N = 2s), on which
//!   trace, product, partial trace and expectation values act as
//!   differential operators,
//! - the T-representation ([`trep::TRep`]): per-rank radii together with
//!   antipodally symmetric constellations of points on the sphere and their
//!   orientation classes.
//!
//! The S-representation (symmetrized Pauli tensor products, [`srep`]) and
//! the Husimi and P quasiprobability functions ([`quasiprob`]) are derived
//! from the same polynomial machinery. A brute-force tensor-embedding
//! oracle ([`states`]) backs every polynomial-side identity in the tests.

pub mod angular;
pub mod constellation;
pub mod error;
mod factorial;
pub mod linalg;
pub mod matrix;
pub mod polynomial;
pub mod quasiprob;
pub mod spin;
pub mod srep;
pub mod states;
pub mod trep;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

/// Numerical tolerances of the geometry layer. The angular tolerances are
/// the configurable knobs; root-finding conditioning degrades with root
/// multiplicity, so class extraction re-verifies itself through vector
/// overlaps rather than trusting the geometry alone.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Gate for Hermitian validation on file load and decomposition.
    pub hermiticity: f64,
    /// Maximum angular mismatch accepted by antipodal pairing, radians.
    pub pairing: f64,
    /// Deviation of |<v,u>| from 1 accepted when assigning a class sign.
    pub class_overlap: f64,
    /// Blocks with w below this are treated as absent.
    pub absent_block: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-8,
            pairing: 1e-6,
            class_overlap: 1e-6,
            absent_block: 1e-12,
        }
    }
}

impl Tolerances {
    /// Override the angular tolerances (pairing and class overlap) with a
    /// single knob, as exposed by the CLI.
    pub fn with_angular(tol: f64) -> Self {
        Self {
            pairing: tol,
            class_overlap: tol,
            ..Self::default()
        }
    }
}
