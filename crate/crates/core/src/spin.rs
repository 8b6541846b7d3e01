//! Spin quantum numbers and the operator types every representation
//! describes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::matrix::CMat;

/// A spin quantum number, stored doubled so half-integer spins are exact.
/// N = 2s is also the polynomial degree and the number of spin-1/2
/// constituents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinQN {
    two_s: u32,
}

impl SpinQN {
    pub fn from_two_s(two_s: u32) -> Self {
        Self { two_s }
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    /// N = 2s, the number of constituents.
    pub fn n(self) -> usize {
        self.two_s as usize
    }

    /// Hilbert-space dimension 2s+1.
    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    pub fn s(self) -> f64 {
        self.two_s as f64 / 2.0
    }

    /// Doubled magnetic quantum number at basis index i (m descending:
    /// index 0 is m = s, index 2s is m = -s).
    pub fn two_m_at(self, index: usize) -> i64 {
        self.two_s as i64 - 2 * index as i64
    }

    /// Basis index of a doubled magnetic quantum number.
    pub fn index_of_two_m(self, two_m: i64) -> Result<usize> {
        let i = (self.two_s as i64 - two_m) / 2;
        if (self.two_s as i64 - two_m) % 2 != 0 || i < 0 || i > self.two_s as i64 {
            return Err(Error::InvalidQuantumNumber(format!(
                "2m = {two_m} invalid for 2s = {}",
                self.two_s
            )));
        }
        Ok(i as usize)
    }
}

/// A spin-s operator with Hermitian entries in the |s,m> basis, m descending.
#[derive(Clone, Debug)]
pub struct HermitianOp {
    two_s: SpinQN,
    matrix: CMat,
}

impl HermitianOp {
    /// Entrywise self-adjointness accepted when constructing directly; the
    /// looser [`crate::Tolerances::hermiticity`] is the gate for file loads.
    pub const HERMITICITY_TOL: f64 = 1e-12;

    /// Wrap a matrix after verifying its dimension and hermiticity.
    pub fn new(two_s: SpinQN, matrix: CMat) -> Result<Self> {
        Self::with_tolerance(two_s, matrix, Self::HERMITICITY_TOL)
    }

    pub fn with_tolerance(two_s: SpinQN, matrix: CMat, tol: f64) -> Result<Self> {
        if matrix.dim() != two_s.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimension {} does not match 2s+1 = {}",
                matrix.dim(),
                two_s.dim()
            )));
        }
        let residual = matrix.hermiticity_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        Ok(Self { two_s, matrix })
    }

    pub fn spin(&self) -> SpinQN {
        self.two_s
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// A Hermitian operator with unit trace and nonnegative spectrum.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    op: HermitianOp,
}

impl DensityMatrix {
    pub fn new(op: HermitianOp) -> Result<Self> {
        let tr = op.matrix.trace();
        if (tr - Complex64::ONE).norm() > 1e-12 {
            return Err(Error::NotDensityMatrix(format!("trace = {tr} is not 1")));
        }
        let min = op.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::NotDensityMatrix(format!(
                "minimum eigenvalue {min:.3e} is negative"
            )));
        }
        Ok(Self { op })
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn into_op(self) -> HermitianOp {
        self.op
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = HermitianOp;
    fn deref(&self) -> &HermitianOp {
        &self.op
    }
}

/// Lowering operator S_- for spin s: <s,m-1|S_-|s,m> = sqrt(s(s+1)-m(m-1)).
pub fn lowering_operator(two_s: SpinQN) -> CMat {
    let n = two_s.dim();
    let s = two_s.s();
    let mut m = CMat::zeros(n);
    for i in 0..n - 1 {
        let mval = two_s.two_m_at(i) as f64 / 2.0;
        m[(i + 1, i)] = Complex64::new((s * (s + 1.0) - mval * (mval - 1.0)).sqrt(), 0.0);
    }
    m
}

/// Spin component operators (S_x, S_y, S_z) for spin s.
pub fn spin_operators(two_s: SpinQN) -> (CMat, CMat, CMat) {
    let n = two_s.dim();
    let sm = lowering_operator(two_s);
    let sp = sm.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, -0.5);
    let sx = sp.add(&sm).unwrap().scale(half);
    let sy = sp.sub(&sm).unwrap().scale(half_i);
    let mut sz = CMat::zeros(n);
    for i in 0..n {
        sz[(i, i)] = Complex64::new(two_s.two_m_at(i) as f64 / 2.0, 0.0);
    }
    (sx, sy, sz)
}
