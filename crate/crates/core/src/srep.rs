//! The S-representation: symmetric-subspace projections of Pauli/ladder
//! tensor products, their factorized polynomials, the conversion
//! coefficients from the tensor-operator basis, and the ladder-commutator
//! machinery.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorial::{big_factorial, embedding_factor, ratio_to_f64, sqrt_ratio};
use crate::matrix::CMat;
use crate::polynomial::{
    identity_poly, operator_from_poly, poly_from_operator, trace_product, MajoranaPoly,
};
use crate::spin::{HermitianOp, SpinQN};

/// Multiplicity vector of an S-operator: how many identity, lowering,
/// sigma_z, and raising factors enter the symmetrized product. The operator
/// only depends on these counts, never on an ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NuIndex {
    pub nu0: u32,
    pub nu_minus: u32,
    pub nu_z: u32,
    pub nu_plus: u32,
}

impl NuIndex {
    pub fn new(nu0: u32, nu_minus: u32, nu_z: u32, nu_plus: u32) -> Self {
        Self {
            nu0,
            nu_minus,
            nu_z,
            nu_plus,
        }
    }

    pub fn total(&self) -> u32 {
        self.nu0 + self.nu_minus + self.nu_z + self.nu_plus
    }
}

/// Coefficients over the S-operator frame at fixed N = 2s.
#[derive(Clone, Debug, PartialEq)]
pub struct SRepVector {
    pub two_s: SpinQN,
    pub coeffs: BTreeMap<NuIndex, Complex64>,
}

impl SRepVector {
    pub fn new(two_s: SpinQN) -> Self {
        Self {
            two_s,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, nu: NuIndex, coeff: Complex64) {
        if coeff != Complex64::ZERO {
            *self.coeffs.entry(nu).or_insert(Complex64::ZERO) += coeff;
        }
    }

    /// Materialize sum_nu c_nu S_nu as a matrix.
    pub fn to_matrix(&self) -> Result<CMat> {
        let mut acc = CMat::zeros(self.two_s.dim());
        for (nu, c) in &self.coeffs {
            if nu.total() != self.two_s.two_s() {
                return Err(Error::InvalidArgument(format!(
                    "nu = {nu:?} sums to {} but N = {}",
                    nu.total(),
                    self.two_s.two_s()
                )));
            }
            acc = acc.add(&s_operator(*nu).scale(*c))?;
        }
        Ok(acc)
    }
}

fn pauli_poly(which: usize) -> MajoranaPoly {
    let mut m = CMat::zeros(2);
    match which {
        0 => {
            m[(0, 0)] = Complex64::ONE;
            m[(1, 1)] = Complex64::ONE;
        }
        1 => m[(1, 0)] = Complex64::new(2.0, 0.0), // sigma_-
        2 => {
            m[(0, 0)] = Complex64::ONE;
            m[(1, 1)] = -Complex64::ONE; // sigma_z
        }
        _ => m[(0, 1)] = Complex64::new(2.0, 0.0), // sigma_+
    }
    poly_from_operator(&m)
}

/// Polynomial of S_nu: the product of single-spin Pauli polynomials raised
/// to the multiplicities, prod_j (p_j)^{nu_j}.
pub fn s_operator_poly(nu: NuIndex) -> MajoranaPoly {
    let mut acc = MajoranaPoly::zero(SpinQN::from_two_s(0));
    *acc.coeff_mut(0, 0) = Complex64::ONE;
    for (which, count) in [nu.nu0, nu.nu_minus, nu.nu_z, nu.nu_plus]
        .into_iter()
        .enumerate()
    {
        if count == 0 {
            continue;
        }
        let p = pauli_poly(which);
        for _ in 0..count {
            acc = acc.mul(&p);
        }
    }
    acc
}

/// The S-operator itself, through the polynomial route. (A 2^N tensor
/// product is never formed; the test suite keeps one as an oracle.)
pub fn s_operator(nu: NuIndex) -> CMat {
    operator_from_poly(&s_operator_poly(nu))
}

/// All multiplicity vectors with total N, in lexicographic order.
pub fn nu_indices(two_s: SpinQN) -> Vec<NuIndex> {
    let n = two_s.two_s();
    let mut out = Vec::new();
    for nu0 in 0..=n {
        for nu_minus in 0..=(n - nu0) {
            for nu_z in 0..=(n - nu0 - nu_minus) {
                out.push(NuIndex::new(nu0, nu_minus, nu_z, n - nu0 - nu_minus - nu_z));
            }
        }
    }
    out
}

/// All frame coefficients c_nu = Tr(rho S_nu) of an operator.
pub fn srep_coefficients(op: &HermitianOp) -> Result<SRepVector> {
    let p_rho = poly_from_operator(op.matrix());
    let mut out = SRepVector::new(op.spin());
    for nu in nu_indices(op.spin()) {
        let c = trace_product(&p_rho, &s_operator_poly(nu))?;
        out.coeffs.insert(nu, c);
    }
    Ok(out)
}

/// Expansion of T_{sigma mu} over the S frame with nu0 = 2s - sigma fixed:
/// the terms are S_{(2s-sigma, k-mu, sigma+mu-2k, k)} for
/// max(0, mu) <= k <= floor((sigma+mu)/2), with real coefficients
/// A(s, sigma, mu, k) built from exact factorial ratios.
pub fn t_in_s_expansion(two_s: SpinQN, sigma: u32, mu: i32) -> Result<Vec<(NuIndex, f64)>> {
    if sigma > two_s.two_s() {
        return Err(Error::InvalidArgument(format!(
            "sigma = {sigma} exceeds 2s = {}",
            two_s.two_s()
        )));
    }
    if mu.unsigned_abs() > sigma {
        return Err(Error::InvalidArgument(format!("|mu| > sigma = {sigma}")));
    }
    let s_i = sigma as i64;
    let mu_i = mu as i64;
    let k_min = mu_i.max(0);
    let k_max = (s_i + mu_i).div_euclid(2);
    let mut out = Vec::new();
    for k in k_min..=k_max {
        let nu = NuIndex::new(
            two_s.two_s() - sigma,
            (k - mu_i) as u32,
            (s_i + mu_i - 2 * k) as u32,
            k as u32,
        );
        out.push((nu, t_in_s_coefficient(two_s.two_s(), sigma, mu, k)?));
    }
    Ok(out)
}

/// A(s, sigma, mu, k): all factorial content is kept rational until the
/// final square root, so the coefficient is exactly real by construction.
fn t_in_s_coefficient(two_s: u32, sigma: u32, mu: i32, k: i64) -> Result<f64> {
    let s_i = sigma as i64;
    let mu_i = mu as i64;
    // sqrt((sigma+mu)! (sigma-mu)! / (2 sigma)!), combined with the square
    // of l(s, sigma)^{-1} kept under the same root
    let under = BigRational::new(
        big_factorial(s_i + mu_i) * big_factorial(s_i - mu_i),
        big_factorial(2 * s_i),
    );
    // rational part: (-1)^k 2^{mu-2k} sigma! / (k! (k-mu)! (sigma+mu-2k)!)
    let two_pow = mu_i - 2 * k;
    let (p2_num, p2_den) = if two_pow >= 0 {
        (BigInt::one() << two_pow as usize, BigInt::one())
    } else {
        (BigInt::one(), BigInt::one() << (-two_pow) as usize)
    };
    let rational = BigRational::new(
        p2_num * big_factorial(s_i),
        p2_den * big_factorial(k) * big_factorial(k - mu_i) * big_factorial(s_i + mu_i - 2 * k),
    );
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * sqrt_ratio(&under) * ratio_to_f64(&rational) / embedding_factor(two_s, sigma))
}

/// [S_-, S_nu] expressed back in the frame: nu_z S_{(nu0, nu_-+1, nu_z-1,
/// nu_+)} - 2 nu_+ S_{(nu0, nu_-, nu_z+1, nu_+-1)}.
pub fn ladder_commutator(nu: NuIndex) -> Vec<(NuIndex, f64)> {
    let mut out = Vec::new();
    if nu.nu_z > 0 {
        out.push((
            NuIndex::new(nu.nu0, nu.nu_minus + 1, nu.nu_z - 1, nu.nu_plus),
            nu.nu_z as f64,
        ));
    }
    if nu.nu_plus > 0 {
        out.push((
            NuIndex::new(nu.nu0, nu.nu_minus, nu.nu_z + 1, nu.nu_plus - 1),
            -2.0 * nu.nu_plus as f64,
        ));
    }
    out
}

/// T^{(tau/2)}_{tau mu} rebuilt from the top component by nested ladder
/// commutators: sqrt((tau+mu)!/((2 tau)! (tau-mu)!)) [S_-, .]^{tau-mu}
/// applied to T_{tau tau} = (-2)^{-tau} S_{(0,0,0,tau)}. The commutators
/// are evaluated entirely on frame coefficients.
pub fn nested_commutator_tensor(tau: u32, mu: i32) -> Result<SRepVector> {
    if mu.unsigned_abs() > tau {
        return Err(Error::InvalidArgument(format!("|mu| > tau = {tau}")));
    }
    let spin = SpinQN::from_two_s(tau);
    let mut vec = SRepVector::new(spin);
    vec.add_term(
        NuIndex::new(0, 0, 0, tau),
        Complex64::new((-2.0_f64).powi(-(tau as i32)), 0.0),
    );
    for _ in 0..(tau as i64 - mu as i64) {
        let mut next = SRepVector::new(spin);
        for (nu, c) in &vec.coeffs {
            for (nu2, factor) in ladder_commutator(*nu) {
                next.add_term(nu2, c * factor);
            }
        }
        vec = next;
    }
    let tau_i = tau as i64;
    let prefactor = sqrt_ratio(&BigRational::new(
        big_factorial(tau_i + mu as i64),
        big_factorial(2 * tau_i) * big_factorial(tau_i - mu as i64),
    ));
    for c in vec.coeffs.values_mut() {
        *c *= prefactor;
    }
    Ok(vec)
}

/// Rescaling factor sqrt((2s+sigma+1)(2s-sigma))/(2s) of a rank-sigma
/// polynomial under one application of the partial-trace operator; zero
/// when the rank saturates 2s.
pub fn reduction_factor(two_s: SpinQN, sigma: u32) -> f64 {
    let n = two_s.two_s();
    if sigma >= n {
        return 0.0;
    }
    (((n + sigma + 1) * (n - sigma)) as f64).sqrt() / n as f64
}

/// Lift the polynomial of T^{(sigma/2)}_{sigma mu} to spin s:
/// p^{(s)} = (z_a conj z_a)^{2s - sigma} p^{(sigma/2)} / l(s, sigma).
pub fn embed_lift(p: &MajoranaPoly, target: SpinQN) -> Result<MajoranaPoly> {
    let sigma = p.spin().two_s();
    if target.two_s() < sigma {
        return Err(Error::InvalidArgument(format!(
            "cannot lift degree {sigma} to smaller degree {}",
            target.two_s()
        )));
    }
    let mut out = p.clone();
    let unit = identity_poly(SpinQN::from_two_s(1));
    for _ in 0..(target.two_s() - sigma) {
        out = out.mul(&unit);
    }
    Ok(out.scale(Complex64::new(
        1.0 / embedding_factor(target.two_s(), sigma),
        0.0,
    )))
}
