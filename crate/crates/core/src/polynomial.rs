//! The bihomogeneous polynomial algebra: the operator <-> polynomial
//! bijection and the differential-operator realizations of trace, product,
//! partial trace, expectation value, and the purity and anticoherence
//! criteria.
//!
//! A degree-(N, N) polynomial in (z1, z2, conj z1, conj z2) is stored as the
//! coefficient tensor `c[alpha][gamma]` of the monomial
//! `z1^alpha z2^{N-alpha} (conj z1)^gamma (conj z2)^{N-gamma}`. Every
//! differential operator of interest becomes a banded index-shift
//! contraction with exact combinatorial factors, so nothing is ever
//! differentiated symbolically at runtime.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constellation::{ExtendedComplex, Star};
use crate::error::{Error, Result};
use crate::factorial::binomial_f64;
use crate::linalg::{dominant_eigenpair_psd, hermitian_eigenvalues, polynomial_roots};
use crate::matrix::CMat;
use crate::spin::SpinQN;
use crate::states::PureState;

/// Majorana polynomial of a spin-s operator.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaPoly {
    two_s: SpinQN,
    /// row-major (N+1) x (N+1): index [alpha * (N+1) + gamma]
    coeffs: Vec<Complex64>,
}

impl MajoranaPoly {
    pub fn zero(two_s: SpinQN) -> Self {
        let d = two_s.dim();
        Self {
            two_s,
            coeffs: vec![Complex64::ZERO; d * d],
        }
    }

    pub fn spin(&self) -> SpinQN {
        self.two_s
    }

    pub fn degree(&self) -> usize {
        self.two_s.n()
    }

    pub fn coeff(&self, alpha: usize, gamma: usize) -> Complex64 {
        self.coeffs[alpha * self.two_s.dim() + gamma]
    }

    pub fn coeff_mut(&mut self, alpha: usize, gamma: usize) -> &mut Complex64 {
        &mut self.coeffs[alpha * self.two_s.dim() + gamma]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            two_s: self.two_s,
            coeffs: self.coeffs.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.two_s != other.two_s {
            return Err(Error::DimensionMismatch("polynomial addition".into()));
        }
        Ok(Self {
            two_s: self.two_s,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Plain polynomial product; degrees add. This is multiplication in the
    /// polynomial ring, not the operator product (see [`product`]).
    pub fn mul(&self, other: &Self) -> Self {
        let n1 = self.degree();
        let n2 = other.degree();
        let two_s = SpinQN::from_two_s((n1 + n2) as u32);
        let mut out = MajoranaPoly::zero(two_s);
        let d_out = two_s.dim();
        for a1 in 0..=n1 {
            for g1 in 0..=n1 {
                let c1 = self.coeff(a1, g1);
                if c1 == Complex64::ZERO {
                    continue;
                }
                for a2 in 0..=n2 {
                    for g2 in 0..=n2 {
                        let c2 = other.coeff(a2, g2);
                        if c2 != Complex64::ZERO {
                            out.coeffs[(a1 + a2) * d_out + (g1 + g2)] += c1 * c2;
                        }
                    }
                }
            }
        }
        out
    }

    /// Polynomial of the adjoint operator: swap holomorphic and
    /// antiholomorphic variables and conjugate the coefficients.
    pub fn adjoint(&self) -> Self {
        let d = self.two_s.dim();
        let mut out = Self::zero(self.two_s);
        for a in 0..d {
            for g in 0..d {
                out.coeffs[a * d + g] = self.coeffs[g * d + a].conj();
            }
        }
        out
    }

    /// Largest deviation from the Hermitian coefficient symmetry
    /// `c[alpha][gamma] = conj(c[gamma][alpha])`.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = self.two_s.dim();
        let mut r: f64 = 0.0;
        for a in 0..d {
            for g in a..d {
                r = r.max((self.coeffs[a * d + g] - self.coeffs[g * d + a].conj()).norm());
            }
        }
        r
    }

    /// Evaluate at z1, z2 (with the antiholomorphic variables set to the
    /// complex conjugates, as for physical evaluations).
    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let n = self.degree();
        let pow = |z: Complex64| -> Vec<Complex64> {
            let mut v = vec![Complex64::ONE; n + 1];
            for k in 1..=n {
                v[k] = v[k - 1] * z;
            }
            v
        };
        let p1 = pow(z1);
        let p2 = pow(z2);
        let q1 = pow(z1.conj());
        let q2 = pow(z2.conj());
        let mut acc = Complex64::ZERO;
        for a in 0..=n {
            for g in 0..=n {
                let c = self.coeff(a, g);
                if c != Complex64::ZERO {
                    acc += c * p1[a] * p2[n - a] * q1[g] * q2[n - g];
                }
            }
        }
        acc
    }

    pub fn dump_entries(&self) -> Vec<PolyEntry> {
        let n = self.degree();
        let mut out = Vec::new();
        for a in 0..=n {
            for g in 0..=n {
                let c = self.coeff(a, g);
                if c != Complex64::ZERO {
                    out.push(PolyEntry {
                        alpha: a,
                        gamma: g,
                        re: c.re,
                        im: c.im,
                    });
                }
            }
        }
        out
    }
}

/// One monomial coefficient, for the debug JSON dump.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PolyEntry {
    pub alpha: usize,
    pub gamma: usize,
    pub re: f64,
    pub im: f64,
}

/// Majorana polynomial of a pure state: coefficients of z1^a z2^{N-a}.
#[derive(Clone, Debug, PartialEq)]
pub struct PureMajoranaPoly {
    two_s: SpinQN,
    coeffs: Vec<Complex64>,
}

impl PureMajoranaPoly {
    pub fn new(two_s: SpinQN, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != two_s.dim() {
            return Err(Error::DimensionMismatch("pure polynomial length".into()));
        }
        if coeffs.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { two_s, coeffs })
    }

    pub fn spin(&self) -> SpinQN {
        self.two_s
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Roots in the extended complex plane, padded with one root at infinity
    /// per missing leading coefficient. The leading coefficient multiplies
    /// z1^N, so deflation there adds infinities.
    pub fn roots(&self) -> Result<Vec<ExtendedComplex>> {
        let max_mag = self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max_mag == 0.0 {
            return Err(Error::ZeroPolynomial);
        }
        let cutoff = 1e-12 * max_mag;
        let mut hi = self.coeffs.len() - 1;
        let mut n_inf = 0;
        while hi > 0 && self.coeffs[hi].norm() < cutoff {
            hi -= 1;
            n_inf += 1;
        }
        let mut lo = 0;
        let mut n_zero = 0;
        while lo < hi && self.coeffs[lo].norm() < cutoff {
            lo += 1;
            n_zero += 1;
        }
        let mut out = Vec::with_capacity(self.two_s.n());
        out.extend(std::iter::repeat_n(
            ExtendedComplex::Finite(Complex64::ZERO),
            n_zero,
        ));
        out.extend(std::iter::repeat_n(ExtendedComplex::Infinity, n_inf));
        if hi > lo {
            for z in polynomial_roots(&self.coeffs[lo..=hi])? {
                out.push(ExtendedComplex::Finite(z));
            }
        }
        Ok(out)
    }
}

/// Majorana polynomial of a matrix:
/// `c[s+m][s+m'] = (-1)^{2s-m-m'} sqrt(binom(2s, s-m) binom(2s, s-m')) <s,m|C|s,m'>`.
/// In index form
/// `c[alpha][gamma] = (-1)^{alpha+gamma} sqrt(binom(N,alpha) binom(N,gamma)) M[N-alpha][N-gamma]`.
pub fn poly_from_operator(m: &CMat) -> MajoranaPoly {
    let n = m.dim() - 1;
    let two_s = SpinQN::from_two_s(n as u32);
    let mut p = MajoranaPoly::zero(two_s);
    for alpha in 0..=n {
        let ba = binomial_f64(n as u32, alpha as u32).sqrt();
        for gamma in 0..=n {
            let bg = binomial_f64(n as u32, gamma as u32).sqrt();
            let sign = if (alpha + gamma) % 2 == 0 { 1.0 } else { -1.0 };
            *p.coeff_mut(alpha, gamma) = m[(n - alpha, n - gamma)] * (sign * ba * bg);
        }
    }
    p
}

/// Exact inverse of [`poly_from_operator`].
pub fn operator_from_poly(p: &MajoranaPoly) -> CMat {
    let n = p.degree();
    let mut m = CMat::zeros(n + 1);
    for alpha in 0..=n {
        let ba = binomial_f64(n as u32, alpha as u32).sqrt();
        for gamma in 0..=n {
            let bg = binomial_f64(n as u32, gamma as u32).sqrt();
            let sign = if (alpha + gamma) % 2 == 0 { 1.0 } else { -1.0 };
            m[(n - alpha, n - gamma)] = p.coeff(alpha, gamma) * (sign / (ba * bg));
        }
    }
    m
}

/// Polynomial of the identity operator, (z_a conj(z_a))^N.
pub fn identity_poly(two_s: SpinQN) -> MajoranaPoly {
    poly_from_operator(&CMat::identity(two_s.dim()))
}

/// Majorana polynomial of a pure state:
/// q[s+m] = (-1)^{s-m} sqrt(binom(2s, s-m)) lambda_m.
pub fn pure_poly(psi: &PureState) -> PureMajoranaPoly {
    let n = psi.spin().n();
    let coeffs: Vec<Complex64> = (0..=n)
        .map(|a| {
            let i = n - a;
            let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
            psi.amplitudes()[i] * sign * binomial_f64(n as u32, a as u32).sqrt()
        })
        .collect();
    PureMajoranaPoly {
        two_s: psi.spin(),
        coeffs,
    }
}

/// p_{|psi><psi|} = p_psi(z_a) conj-coefficient-poly(conj z_a); rank one by
/// construction.
pub fn poly_of_pure_density(psi: &PureState) -> MajoranaPoly {
    let q = pure_poly(psi);
    let n = psi.spin().n();
    let mut p = MajoranaPoly::zero(psi.spin());
    for a in 0..=n {
        for g in 0..=n {
            *p.coeff_mut(a, g) = q.coeffs[a] * q.coeffs[g].conj();
        }
    }
    p
}

/// The partial-trace operator L = N^{-2} (d/dz_a)(d/dconj(z_a)), lowering the
/// degree by one and realizing the trace over one spin-1/2 constituent.
pub fn partial_trace_l(p: &MajoranaPoly) -> Result<MajoranaPoly> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cannot partial-trace a degree-0 polynomial".into(),
        ));
    }
    let two_s = SpinQN::from_two_s(n as u32 - 1);
    let mut out = MajoranaPoly::zero(two_s);
    let inv_n2 = 1.0 / (n * n) as f64;
    for a in 0..n {
        for g in 0..n {
            let term = p.coeff(a + 1, g + 1) * ((a + 1) * (g + 1)) as f64
                + p.coeff(a, g) * ((n - a) * (n - g)) as f64;
            *out.coeff_mut(a, g) = term * inv_n2;
        }
    }
    Ok(out)
}

/// L applied k times.
pub fn partial_trace_l_k(p: &MajoranaPoly, k: u32) -> Result<MajoranaPoly> {
    let mut q = p.clone();
    for _ in 0..k {
        q = partial_trace_l(&q)?;
    }
    Ok(q)
}

/// Trace of the underlying operator, from the N-fold partial trace
/// (N!)^{-2} (d_a d^a)^N p.
pub fn trace(p: &MajoranaPoly) -> Complex64 {
    let mut q = p.clone();
    while q.degree() > 0 {
        q = partial_trace_l(&q).expect("degree > 0");
    }
    q.coeff(0, 0)
}

/// Operator product realized on polynomials:
/// p_{DE} = (N!)^{-1} p_D(z_a, d_a) p_E(z_a, conj z_a), which at the
/// coefficient level is
/// `c[alpha][delta] = sum_gamma d[alpha][gamma] e[gamma][delta] / binom(N, gamma)`.
pub fn product(pd: &MajoranaPoly, pe: &MajoranaPoly) -> Result<MajoranaPoly> {
    if pd.two_s != pe.two_s {
        return Err(Error::DimensionMismatch(
            "operator product needs equal degrees".into(),
        ));
    }
    let n = pd.degree();
    let mut out = MajoranaPoly::zero(pd.two_s);
    for alpha in 0..=n {
        for gamma in 0..=n {
            let d = pd.coeff(alpha, gamma);
            if d == Complex64::ZERO {
                continue;
            }
            let weight = 1.0 / binomial_f64(n as u32, gamma as u32);
            for delta in 0..=n {
                let e = pe.coeff(gamma, delta);
                if e != Complex64::ZERO {
                    *out.coeff_mut(alpha, delta) += d * e * weight;
                }
            }
        }
    }
    Ok(out)
}

/// Tr(C D) = (N!)^{-2} p_C(d^a, d_a) p_D(z_a, conj z_a): at the coefficient
/// level
/// `sum_{alpha gamma} c[alpha][gamma] d[gamma][alpha] / (binom(N,alpha) binom(N,gamma))`.
pub fn trace_product(pc: &MajoranaPoly, pd: &MajoranaPoly) -> Result<Complex64> {
    if pc.two_s != pd.two_s {
        return Err(Error::DimensionMismatch(
            "trace product needs equal degrees".into(),
        ));
    }
    let n = pc.degree();
    let mut acc = Complex64::ZERO;
    for alpha in 0..=n {
        let ba = binomial_f64(n as u32, alpha as u32);
        for gamma in 0..=n {
            let c = pc.coeff(alpha, gamma);
            if c == Complex64::ZERO {
                continue;
            }
            let bg = binomial_f64(n as u32, gamma as u32);
            acc += c * pd.coeff(gamma, alpha) / (ba * bg);
        }
    }
    Ok(acc)
}

/// Directional derivative (cos(t/2) d_{z1} - sin(t/2) e^{-i phi} d_{z2}) p,
/// contracting one constituent along the star m.
pub fn directional_derivative(p: &PureMajoranaPoly, m: &Star) -> Result<PureMajoranaPoly> {
    let n = p.two_s.n();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cannot contract a spin-0 polynomial".into(),
        ));
    }
    let cos = Complex64::new((m.theta / 2.0).cos(), 0.0);
    let sin = Complex64::from_polar((m.theta / 2.0).sin(), -m.phi);
    let coeffs: Vec<Complex64> = (0..n)
        .map(|a| p.coeffs[a + 1] * cos * (a + 1) as f64 - p.coeffs[a] * sin * (n - a) as f64)
        .collect();
    Ok(PureMajoranaPoly {
        two_s: SpinQN::from_two_s(n as u32 - 1),
        coeffs,
    })
}

/// <psi| C |psi> through the polynomial of C. Exact contraction of the
/// normalized state's pure polynomial with p_C.
pub fn expectation(psi: &PureState, pc: &MajoranaPoly) -> Result<Complex64> {
    if psi.spin() != pc.two_s {
        return Err(Error::DimensionMismatch("expectation value".into()));
    }
    trace_product(&poly_of_pure_density(psi), pc)
}

/// Expectation value from a constellation: the star-directional derivatives
/// of the defining equation applied to p_C, normalized by the same
/// derivatives applied to the identity polynomial (the product form of the
/// pure polynomial is only normalized up to that factor).
pub fn expectation_from_stars(stars: &[Star], pc: &MajoranaPoly) -> Result<Complex64> {
    if stars.len() != pc.degree() {
        return Err(Error::DimensionMismatch(
            "number of stars must equal the polynomial degree".into(),
        ));
    }
    let value = star_contraction(stars, pc);
    let norm = star_contraction(stars, &identity_poly(pc.two_s));
    if norm.norm() < 1e-300 {
        return Err(Error::Numerical(
            "star contraction normalization vanished".into(),
        ));
    }
    Ok(value / norm)
}

/// Apply prod_k d^{n_k} prod_k d_{n_k} to p and return the remaining scalar
/// (the (N!)^{-2} prefactor cancels in the expectation ratio and is
/// omitted). Works on a rectangular coefficient tensor since the two
/// variable pairs lose degree independently.
fn star_contraction(stars: &[Star], p: &MajoranaPoly) -> Complex64 {
    let n = p.degree();
    // rectangular tensor c[a][g], holomorphic degree dh, antiholomorphic da
    let mut dh = n;
    let mut da = n;
    let mut c: Vec<Complex64> = p.coeffs.clone();
    // holomorphic contractions d_{n_k} = cos d_1 - sin e^{-i phi} d_2
    for star in stars {
        let cos = Complex64::new((star.theta / 2.0).cos(), 0.0);
        let sin = Complex64::from_polar((star.theta / 2.0).sin(), -star.phi);
        let width = da + 1;
        let mut next = vec![Complex64::ZERO; dh * width];
        for a in 0..dh {
            for g in 0..width {
                next[a * width + g] = c[(a + 1) * width + g] * cos * (a + 1) as f64
                    - c[a * width + g] * sin * (dh - a) as f64;
            }
        }
        c = next;
        dh -= 1;
    }
    // antiholomorphic contractions d^{n_k} = cos d^1 - sin e^{+i phi} d^2;
    // by now dh = 0, so the tensor is a flat vector over the gamma index
    for star in stars {
        let cos = Complex64::new((star.theta / 2.0).cos(), 0.0);
        let sin = Complex64::from_polar((star.theta / 2.0).sin(), star.phi);
        let mut next = vec![Complex64::ZERO; da];
        for g in 0..da {
            next[g] = c[g + 1] * cos * (g + 1) as f64 - c[g] * sin * (da - g) as f64;
        }
        c = next;
        da -= 1;
    }
    c[0]
}

/// A polynomial belongs to a pure state iff its coefficient tensor, viewed
/// as a matrix, is rank one (with positive weight). Checked through the
/// Hermitian spectrum of the tensor; the differential characterization
/// p(z_a, d_a) p = N! p is kept as a test oracle.
pub fn is_pure_poly(p: &MajoranaPoly) -> bool {
    if p.hermiticity_residual() > 1e-8 * p.max_abs().max(1e-300) {
        return false;
    }
    let d = p.two_s.dim();
    let m = CMat::from_rows(d, p.coeffs.clone()).expect("square by construction");
    let eigs = hermitian_eigenvalues(&m);
    let top = eigs[d - 1];
    if top <= 0.0 {
        return false;
    }
    let second = eigs[..d - 1].iter().map(|v| v.abs()).fold(0.0, f64::max);
    second <= 1e-8 * top
}

/// For a rank-one (pure-state) polynomial, recover the pure polynomial
/// factor q with p = q conj(q).
pub fn pure_factor(p: &MajoranaPoly) -> Result<PureMajoranaPoly> {
    let d = p.two_s.dim();
    let m = CMat::from_rows(d, p.coeffs.clone()).expect("square");
    let (lambda, v) = dominant_eigenpair_psd(&m);
    if lambda <= 0.0 {
        return Err(Error::Numerical(
            "polynomial is not positive rank-one".into(),
        ));
    }
    let coeffs: Vec<Complex64> = v.iter().map(|z| z * lambda.sqrt()).collect();
    PureMajoranaPoly::new(p.two_s, coeffs)
}

/// Residuals of the anticoherence test for each order t = 1..N and the
/// resulting order: the largest t whose reductions down to spin t/2 are all
/// maximally mixed within `tol` (Frobenius distance on operators).
#[derive(Clone, Debug)]
pub struct AnticoherenceReport {
    pub order: u32,
    /// residuals[t-1] corresponds to order t
    pub residuals: Vec<f64>,
}

pub fn anticoherence_order(p_rho: &MajoranaPoly, tol: f64) -> Result<AnticoherenceReport> {
    let n = p_rho.degree() as u32;
    let mut residuals = vec![0.0; n as usize];
    let mut current = p_rho.clone();
    // walk down: after N - t applications of L the degree is t
    let mut degree = n;
    while degree > 0 {
        let t = degree as usize;
        let m = operator_from_poly(&current);
        let dim = t + 1;
        let tr = m.trace();
        let mm = CMat::identity(dim).scale(tr / dim as f64);
        residuals[t - 1] = m.sub(&mm).expect("same dim").frobenius_norm();
        current = partial_trace_l(&current)?;
        degree -= 1;
    }
    let mut order = 0;
    for t in 1..=n {
        if residuals[t as usize - 1] <= tol {
            order = t;
        } else {
            break;
        }
    }
    Ok(AnticoherenceReport { order, residuals })
}
