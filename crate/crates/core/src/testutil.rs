//! Random states and operators shared by the test modules.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::CMat;
use crate::spin::{DensityMatrix, HermitianOp, SpinQN};
use crate::states::PureState;

pub fn random_state(two_s: SpinQN, rng: &mut ChaCha8Rng) -> PureState {
    let amps: Vec<Complex64> = (0..two_s.dim())
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    PureState::new_unnormalized(two_s, amps).unwrap()
}

/// Random full-rank density matrix from a Ginibre factor.
pub fn random_density(two_s: SpinQN, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let dim = two_s.dim();
    let mut a = CMat::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            a[(i, j)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    let mut m = a.mul(&a.adjoint()).unwrap();
    let tr = m.trace();
    m = m.scale(Complex64::new(1.0 / tr.re, 0.0));
    DensityMatrix::new(HermitianOp::new(two_s, m).unwrap()).unwrap()
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(two_s: SpinQN, rng: &mut ChaCha8Rng) -> HermitianOp {
    let dim = two_s.dim();
    let mut m = CMat::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.gen::<f64>() - 0.5, 0.0);
        for j in i + 1..dim {
            let z = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOp::new(two_s, m).unwrap()
}

/// Random general (non-Hermitian) matrix.
pub fn random_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut m = CMat::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    m
}
