//! Shared random-instance generators for the integration suites.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use spinrep::matrix::CMat;
use spinrep::spin::{DensityMatrix, HermitianOp, SpinQN};
use spinrep::states::PureState;

pub fn random_state(two_s: SpinQN, rng: &mut ChaCha8Rng) -> PureState {
    let amps: Vec<Complex64> = (0..two_s.dim())
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    PureState::new_unnormalized(two_s, amps).unwrap()
}

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

pub fn random_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut m = CMat::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    m
}

pub fn random_star(rng: &mut ChaCha8Rng) -> spinrep::constellation::Star {
    spinrep::constellation::Star::new(
        (1.0 - 2.0 * rng.gen::<f64>()).acos(),
        rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
    )
}
