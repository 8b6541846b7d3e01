//! Angular-momentum kernel: Clebsch-Gordan coefficients, Wigner rotation
//! matrices, irreducible tensor operators, the symmetric projector, and the
//! antipodal (time-reversal) map.
//!
//! All quantum numbers are passed doubled (`two_j = 2j`) so half-integer
//! spins stay exact. Matrices are indexed with m descending, matching
//! [`SpinQN::two_m_at`].

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factorial::{big_factorial_halved, factorial_f64, ratio_to_f64, sqrt_ratio};
use crate::matrix::CMat;
use crate::spin::{HermitianOp, SpinQN};
use crate::states::PureState;

/// zyz Euler angles of a rotation, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }
}

/// Clebsch-Gordan coefficient C^{j m}_{j1 m1, j2 m2} in the Condon-Shortley
/// convention, from the Racah sum over exact big-integer factorials. The
/// float conversion happens only on the final rational and the final square
/// root, so there is no cancellation for spins well beyond 20.
///
/// Returns 0 when a selection rule fails (m != m1+m2, triangle inequality,
/// |m| > j). Rejects negative or parity-inconsistent doubled arguments.
pub fn clebsch_gordan(
    two_j1: i64,
    two_m1: i64,
    two_j2: i64,
    two_m2: i64,
    two_j: i64,
    two_m: i64,
) -> Result<f64> {
    if two_j1 < 0 || two_j2 < 0 || two_j < 0 {
        return Err(Error::InvalidQuantumNumber(format!(
            "negative doubled angular momentum ({two_j1}, {two_j2}, {two_j})"
        )));
    }
    for (j, m) in [(two_j1, two_m1), (two_j2, two_m2), (two_j, two_m)] {
        if (j + m) % 2 != 0 {
            return Err(Error::InvalidQuantumNumber(format!(
                "2j = {j} and 2m = {m} differ in parity"
            )));
        }
    }
    if two_m1 + two_m2 != two_m
        || two_m1.abs() > two_j1
        || two_m2.abs() > two_j2
        || two_m.abs() > two_j
        || two_j < (two_j1 - two_j2).abs()
        || two_j > two_j1 + two_j2
        || (two_j1 + two_j2 + two_j) % 2 != 0
    {
        return Ok(0.0);
    }

    let f = big_factorial_halved;
    // (2j+1) * triangle coefficient * the six (j +- m)! factors, all exact.
    let prefactor = BigRational::new(
        BigInt::from(two_j + 1)
            * f(two_j1 + two_j2 - two_j)
            * f(two_j1 - two_j2 + two_j)
            * f(-two_j1 + two_j2 + two_j)
            * f(two_j1 + two_m1)
            * f(two_j1 - two_m1)
            * f(two_j2 + two_m2)
            * f(two_j2 - two_m2)
            * f(two_j + two_m)
            * f(two_j - two_m),
        f(two_j1 + two_j2 + two_j + 2),
    );

    let k_min = 0
        .max((two_j2 - two_j - two_m1) / 2)
        .max((two_j1 + two_m2 - two_j) / 2);
    let k_max = ((two_j1 + two_j2 - two_j) / 2)
        .min((two_j1 - two_m1) / 2)
        .min((two_j2 + two_m2) / 2);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = f(2 * k)
            * f(two_j1 + two_j2 - two_j - 2 * k)
            * f(two_j1 - two_m1 - 2 * k)
            * f(two_j2 + two_m2 - 2 * k)
            * f(two_j - two_j2 + two_m1 + 2 * k)
            * f(two_j - two_j1 - two_m2 + 2 * k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sqrt_ratio(&prefactor) * ratio_to_f64(&sum))
}

/// Irreducible tensor operator T_{sigma mu} on the spin-s space.
///
/// Entries at row m, column m' are (-1)^{s-m'} C^{sigma mu}_{s m, s -m'}.
/// The set over all 0 <= sigma <= 2s, |mu| <= sigma is an orthonormal
/// basis of the operator space under the Hilbert-Schmidt inner product.
#[derive(Clone, Debug)]
pub struct TensorOperator {
    pub two_s: SpinQN,
    pub sigma: u32,
    pub mu: i32,
    pub matrix: CMat,
}

pub fn tensor_operator(two_s: SpinQN, sigma: u32, mu: i32) -> Result<TensorOperator> {
    if sigma > two_s.two_s() {
        return Err(Error::InvalidArgument(format!(
            "rank sigma = {sigma} exceeds 2s = {}",
            two_s.two_s()
        )));
    }
    if mu.unsigned_abs() > sigma {
        return Err(Error::InvalidArgument(format!(
            "|mu| = {} exceeds sigma = {sigma}",
            mu.abs()
        )));
    }
    let n = two_s.dim();
    let mut matrix = CMat::zeros(n);
    for row in 0..n {
        let two_m = two_s.two_m_at(row);
        for col in 0..n {
            let two_mp = two_s.two_m_at(col);
            let c = clebsch_gordan(
                two_s.two_s() as i64,
                two_m,
                two_s.two_s() as i64,
                -two_mp,
                2 * sigma as i64,
                2 * mu as i64,
            )?;
            if c != 0.0 {
                let sign = if ((two_s.two_s() as i64 - two_mp) / 2) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                matrix[(row, col)] = Complex64::new(sign * c, 0.0);
            }
        }
    }
    Ok(TensorOperator {
        two_s,
        sigma,
        mu,
        matrix,
    })
}

/// Wigner small-d matrix element d^j_{m' m}(beta), doubled arguments.
pub fn wigner_d_small(two_j: i64, two_mp: i64, two_m: i64, beta: f64) -> f64 {
    debug_assert!(two_j >= 0 && two_mp.abs() <= two_j && two_m.abs() <= two_j);
    let jp_mp = ((two_j + two_mp) / 2) as u32;
    let jm_mp = ((two_j - two_mp) / 2) as u32;
    let jp_m = ((two_j + two_m) / 2) as u32;
    let jm_m = ((two_j - two_m) / 2) as u32;
    let pre =
        (factorial_f64(jp_mp) * factorial_f64(jm_mp) * factorial_f64(jp_m) * factorial_f64(jm_m))
            .sqrt();
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    let dm = (two_mp - two_m) / 2; // m' - m
    let k_min = 0.max(-dm);
    let k_max = (jp_m as i64).min(jm_mp as i64);
    let mut acc = 0.0;
    for k in k_min..=k_max {
        let sign = if (dm + k) % 2 == 0 { 1.0 } else { -1.0 };
        let c_exp = (jp_m as i64 - k) + (jm_mp as i64 - k);
        let s_exp = dm + 2 * k;
        let den = factorial_f64((jp_m as i64 - k) as u32)
            * factorial_f64(k as u32)
            * factorial_f64((jm_mp as i64 - k) as u32)
            * factorial_f64((dm + k) as u32);
        acc += sign * c.powi(c_exp as i32) * s.powi(s_exp as i32) / den;
    }
    pre * acc
}

/// Full Wigner D matrix D^{(j)}_{m' m} = e^{-i alpha m'} d(beta) e^{-i gamma m}
/// for arbitrary (doubled) j, rows and columns ordered m descending.
pub fn rotation_matrix(two_s: SpinQN, euler: EulerAngles) -> CMat {
    let n = two_s.dim();
    let mut m = CMat::zeros(n);
    for row in 0..n {
        let two_mp = two_s.two_m_at(row);
        let phase_a = Complex64::from_polar(1.0, -euler.alpha * two_mp as f64 / 2.0);
        for col in 0..n {
            let two_m = two_s.two_m_at(col);
            let phase_g = Complex64::from_polar(1.0, -euler.gamma * two_m as f64 / 2.0);
            let d = wigner_d_small(two_s.two_s() as i64, two_mp, two_m, euler.beta);
            m[(row, col)] = phase_a * phase_g * d;
        }
    }
    m
}

/// Wigner D matrix of integer rank sigma.
pub fn wigner_d(sigma: u32, euler: EulerAngles) -> CMat {
    rotation_matrix(SpinQN::from_two_s(2 * sigma), euler)
}

/// U(R) C U(R)^dagger for a general matrix.
pub fn rotate_matrix(m: &CMat, two_s: SpinQN, euler: EulerAngles) -> Result<CMat> {
    if m.dim() != two_s.dim() {
        return Err(Error::DimensionMismatch("rotate_matrix".into()));
    }
    let u = rotation_matrix(two_s, euler);
    u.mul(m)?.mul(&u.adjoint())
}

/// U(R) op U(R)^dagger.
pub fn rotate_operator(op: &HermitianOp, euler: EulerAngles) -> HermitianOp {
    let rotated = rotate_matrix(op.matrix(), op.spin(), euler).expect("dimensions match");
    HermitianOp::with_tolerance(op.spin(), rotated, 1e-9)
        .expect("unitary conjugation preserves hermiticity")
}

/// Components <sigma,mu| P_sigma (|n_1> x ... x |n_{2 sigma}>) of the
/// symmetric projection of 2*sigma spin-1/2 kets, mu descending.
///
/// Expanding prod_k (alpha_k x + beta_k) and reading off the coefficient of
/// x^{sigma+mu} gives exactly the permanent-type sum over up/down
/// assignments, so no 2^(2 sigma) tensor is ever formed.
pub fn symmetric_projector_apply(kets: &[[Complex64; 2]]) -> Result<Vec<Complex64>> {
    if kets.is_empty() {
        return Err(Error::InvalidArgument(
            "symmetric projector needs at least one constituent".into(),
        ));
    }
    let two_sigma = kets.len();
    let mut poly = vec![Complex64::ONE];
    for ket in kets {
        let mut next = vec![Complex64::ZERO; poly.len() + 1];
        for (k, &coeff) in poly.iter().enumerate() {
            next[k + 1] += ket[0] * coeff;
            next[k] += ket[1] * coeff;
        }
        poly = next;
    }
    Ok((0..=two_sigma)
        .map(|i| {
            // index i corresponds to mu = sigma - i, i.e. x-power 2 sigma - i
            poly[two_sigma - i] / crate::factorial::binomial_f64(two_sigma as u32, i as u32).sqrt()
        })
        .collect())
}

/// The antipodal (time-reversal) operator: component m of the output is
/// (-1)^{s+m} conj(lambda_{-m}). Anti-unitary; applying it twice gives
/// (-1)^{2s}.
pub fn antipodal_map(psi: &PureState) -> PureState {
    let n = psi.spin().n();
    let amps = psi.amplitudes();
    let out: Vec<Complex64> = (0..=n)
        .map(|i| {
            // s + m = N - i, and -m sits at index N - i
            let sign = if (n - i).is_multiple_of(2) { 1.0 } else { -1.0 };
            amps[n - i].conj() * sign
        })
        .collect();
    PureState::new_unnormalized(psi.spin(), out).expect("antipodal map preserves the norm")
}
