//! Named states, construction of pure states from stars, and the brute-force
//! tensor-embedding oracle used to validate every polynomial-side
//! computation.

use num_complex::Complex64;

use crate::constellation::{stereographic, Star};
use crate::error::{Error, Result};
use crate::factorial::binomial_f64;
use crate::matrix::CMat;
use crate::spin::{DensityMatrix, HermitianOp, SpinQN};

/// A normalized pure spin-s state in the |s,m> basis, m descending.
#[derive(Clone, Debug)]
pub struct PureState {
    two_s: SpinQN,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wrap already-normalized amplitudes.
    pub fn new(two_s: SpinQN, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != two_s.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has {} amplitudes, expected {}",
                amplitudes.len(),
                two_s.dim()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have norm {norm}, expected 1"
            )));
        }
        Ok(Self { two_s, amplitudes })
    }

    /// Normalize and wrap.
    pub fn new_unnormalized(two_s: SpinQN, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != two_s.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has {} amplitudes, expected {}",
                amplitudes.len(),
                two_s.dim()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { two_s, amplitudes })
    }

    pub fn spin(&self) -> SpinQN {
        self.two_s
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Gauge fix: rotate the global phase so the first amplitude above
    /// threshold is real positive.
    pub fn canonical_phase(mut self) -> Self {
        if let Some(z) = self.amplitudes.iter().find(|z| z.norm() > 1e-12) {
            let phase = z.conj() / z.norm();
            self.amplitudes.iter_mut().for_each(|a| *a *= phase);
        }
        self
    }

    /// |<self|other>|, insensitive to global phases.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    pub fn density(&self) -> DensityMatrix {
        let n = self.two_s.dim();
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        let op = HermitianOp::new(self.two_s, m).expect("projector is Hermitian");
        DensityMatrix::new(op).expect("projector is a state")
    }
}

/// Dicke state |s, m>, the basis vector itself.
pub fn dicke_state(two_s: SpinQN, two_m: i64) -> Result<PureState> {
    let idx = two_s.index_of_two_m(two_m)?;
    let mut amps = vec![Complex64::ZERO; two_s.dim()];
    amps[idx] = Complex64::ONE;
    PureState::new(two_s, amps)
}

/// The fully symmetric state of N spin-1/2 constituents pointing along the
/// given stars. Built by expanding prod_k (alpha_k z1 - beta_k z2) and
/// unwinding the Majorana coefficients, then normalizing with the canonical
/// phase gauge (first nonzero amplitude real positive).
pub fn pure_from_stars(stars: &[Star]) -> Result<PureState> {
    if stars.is_empty() {
        return Err(Error::InvalidArgument(
            "a pure state needs at least one star".into(),
        ));
    }
    let n = stars.len();
    // product polynomial q[a] = coefficient of z1^a z2^{n-a}
    let mut q = vec![Complex64::ONE];
    for star in stars {
        let [alpha, beta] = star.qubit();
        let mut next = vec![Complex64::ZERO; q.len() + 1];
        for (k, &c) in q.iter().enumerate() {
            next[k + 1] += alpha * c;
            next[k] -= beta * c;
        }
        q = next;
    }
    // q[a] = (-1)^{s-m} sqrt(binom(N, s-m)) lambda_m with a = s+m
    let two_s = SpinQN::from_two_s(n as u32);
    let mut amps = vec![Complex64::ZERO; n + 1];
    for (a, &coeff) in q.iter().enumerate() {
        let i = n - a; // basis index, m descending
        let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        amps[i] = coeff * sign / binomial_f64(n as u32, a as u32).sqrt();
    }
    Ok(PureState::new_unnormalized(two_s, amps)?.canonical_phase())
}

/// The Majorana constellation of a pure state: stereographic projection of
/// the roots of its characteristic polynomial, with the customary roots at
/// infinity for missing leading coefficients.
pub fn majorana_constellation(psi: &PureState) -> Result<Vec<Star>> {
    let q = crate::polynomial::pure_poly(psi);
    Ok(q.roots()?.into_iter().map(stereographic).collect())
}

/// Families of states used throughout the examples and the CLI.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedState {
    /// Spin-coherent state along a direction.
    SpinCoherent(Star),
    /// Dicke state |s, m>, m passed doubled.
    Dicke { two_m: i64 },
    /// (|s,s> + |s,-s>)/sqrt(2) projector; alias of CatQ.
    Ghz,
    /// Dicke |s, s-1>.
    W,
    /// Coherent superposition of the two polar SC states.
    CatQ,
    /// Classical mixture of the two polar SC states.
    CatC,
    /// Identity / (2s+1).
    MaximallyMixed,
}

pub fn named_state(name: NamedState, two_s: SpinQN) -> Result<DensityMatrix> {
    let dim = two_s.dim();
    match name {
        NamedState::SpinCoherent(star) => {
            let stars = vec![star; two_s.n().max(1)];
            if two_s.n() == 0 {
                // spin 0: the only state
                let op = HermitianOp::new(two_s, CMat::identity(1))?;
                return DensityMatrix::new(op);
            }
            Ok(pure_from_stars(&stars)?.density())
        }
        NamedState::Dicke { two_m } => Ok(dicke_state(two_s, two_m)?.density()),
        NamedState::Ghz | NamedState::CatQ => {
            if two_s.two_s() == 0 {
                return Err(Error::InvalidArgument(
                    "cat states need two distinct polar levels (s >= 1/2)".into(),
                ));
            }
            let mut amps = vec![Complex64::ZERO; dim];
            amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[dim - 1] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            Ok(PureState::new(two_s, amps)?.density())
        }
        NamedState::W => {
            if two_s.two_s() < 2 {
                return Err(Error::InvalidArgument("the W state needs s >= 1".into()));
            }
            Ok(dicke_state(two_s, two_s.two_s() as i64 - 2)?.density())
        }
        NamedState::CatC => {
            if two_s.two_s() == 0 {
                return Err(Error::InvalidArgument(
                    "cat states need two distinct polar levels (s >= 1/2)".into(),
                ));
            }
            let mut m = CMat::zeros(dim);
            m[(0, 0)] = Complex64::new(0.5, 0.0);
            m[(dim - 1, dim - 1)] = Complex64::new(0.5, 0.0);
            DensityMatrix::new(HermitianOp::new(two_s, m)?)
        }
        NamedState::MaximallyMixed => {
            let m = CMat::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
            DensityMatrix::new(HermitianOp::new(two_s, m)?)
        }
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracle on the full (C^2)^(x N) product space.
// ---------------------------------------------------------------------------

const ORACLE_MAX_TWO_S: u32 = 12;

/// <product basis state x | Dicke basis index i> for N qubits: nonzero iff
/// x has exactly i down bits, with value binom(N, i)^{-1/2}.
fn dicke_amplitude(n: usize, x: usize, i: usize) -> f64 {
    if (x.count_ones() as usize) == i {
        1.0 / binomial_f64(n as u32, i as u32).sqrt()
    } else {
        0.0
    }
}

/// Partial trace over `k` spin-1/2 constituents, computed honestly on the
/// product space: the operator is pushed through the Dicke isometry, the
/// last k tensor factors are traced in the product basis, and the result is
/// projected back onto the symmetric (Dicke) basis of N-k qubits. Capped at
/// 2s <= 12 so the 2^N sums stay bounded; the polynomial path has no cap.
pub fn oracle_partial_trace(op: &HermitianOp, k: u32) -> Result<HermitianOp> {
    let two_s = op.spin().two_s();
    if two_s > ORACLE_MAX_TWO_S {
        return Err(Error::SpinTooLargeForOracle { two_s });
    }
    if k > two_s {
        return Err(Error::InvalidArgument(format!(
            "cannot trace {k} constituents out of {two_s}"
        )));
    }
    let n = two_s as usize;
    let rest = n - k as usize;
    let dim_in = n + 1;
    let dim_out = rest + 1;
    let spin_out = SpinQN::from_two_s(rest as u32);

    let mut out = CMat::zeros(dim_out);
    // W^dag M_b with M_b = (I x <b|) V, entries over the product basis of
    // the first `rest` qubits; only popcounts enter.
    for b in 0..(1usize << k) {
        let downs_b = b.count_ones() as usize;
        // (W^dag M_b)[i'][i] = sqrt(binom(rest, i')) / sqrt(binom(n, i)) for
        // i = i' + downs_b -- derived by summing the product basis of the
        // leading `rest` factors at fixed popcount.
        let mut wm = vec![0.0; dim_out * dim_in];
        for ip in 0..dim_out {
            let i = ip + downs_b;
            if i < dim_in {
                wm[ip * dim_in + i] = binomial_f64(rest as u32, ip as u32).sqrt()
                    / binomial_f64(n as u32, i as u32).sqrt();
            }
        }
        for ip in 0..dim_out {
            for jp in 0..dim_out {
                let mut acc = Complex64::ZERO;
                for i in 0..dim_in {
                    if wm[ip * dim_in + i] == 0.0 {
                        continue;
                    }
                    for j in 0..dim_in {
                        if wm[jp * dim_in + j] == 0.0 {
                            continue;
                        }
                        acc += wm[ip * dim_in + i] * op.matrix()[(i, j)] * wm[jp * dim_in + j];
                    }
                }
                out[(ip, jp)] += acc;
            }
        }
    }
    HermitianOp::with_tolerance(spin_out, out, 1e-10)
}

/// Plain dense matrix product; reference implementation for the polynomial
/// product.
pub fn oracle_matrix_product(a: &CMat, b: &CMat) -> Result<CMat> {
    a.mul(b)
}

/// Plain matrix trace.
pub fn oracle_trace(a: &CMat) -> Complex64 {
    a.trace()
}

/// <psi| C |psi> by direct matrix-vector contraction.
pub fn oracle_expectation(psi: &PureState, c: &CMat) -> Result<Complex64> {
    let cv = c.mul_vec(psi.amplitudes())?;
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&cv)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Contraction of one constituent with <m|, on the symmetric embedding:
/// returns the (unnormalized) spin-(s - 1/2) amplitudes of
/// (<m| x I^(N-1)) |psi_embedded>, projected back to the Dicke basis.
#[allow(clippy::needless_range_loop)]
pub fn oracle_contract_constituent(psi: &PureState, m: &Star) -> Result<Vec<Complex64>> {
    let two_s = psi.spin().two_s();
    if two_s > ORACLE_MAX_TWO_S {
        return Err(Error::SpinTooLargeForOracle { two_s });
    }
    if two_s == 0 {
        return Err(Error::InvalidArgument("spin 0 has no constituents".into()));
    }
    let n = two_s as usize;
    let [alpha, beta] = m.qubit();
    let bra = [alpha.conj(), beta.conj()];
    let dim_out = n; // 2s' + 1 with s' = s - 1/2
    let mut out = vec![Complex64::ZERO; dim_out];
    // enumerate product states y of the remaining N-1 qubits
    for y in 0..(1usize << (n - 1)) {
        let downs_y = y.count_ones() as usize;
        // first qubit q in {0 = up, 1 = down}
        let mut amp = Complex64::ZERO;
        for q in 0..2usize {
            let i = downs_y + q;
            if i <= n {
                amp += bra[q] * psi.amplitudes()[i] * dicke_amplitude(n, (y << 1) | q, i);
            }
        }
        // project onto the Dicke basis of N-1 qubits
        out[downs_y] += amp * dicke_amplitude(n - 1, y, downs_y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::testutil::{random_density, random_state};

    #[test]
    fn stretched_state_from_polar_stars() {
        let psi = pure_from_stars(&[Star::plus_z(); 4]).unwrap();
        assert!((psi.amplitudes()[0].re - 1.0).abs() < 1e-14);
        assert!(psi.amplitudes()[1..].iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn two_opposite_stars_give_m0_dicke() {
        let psi = pure_from_stars(&[Star::plus_z(), Star::minus_z()]).unwrap();
        let expect = dicke_state(SpinQN::from_two_s(2), 0).unwrap();
        assert!((psi.overlap(&expect) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn stars_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=8usize {
            for _ in 0..(100 / n.max(4)) {
                let stars: Vec<Star> = (0..n)
                    .map(|_| {
                        Star::new(
                            rng.gen::<f64>() * std::f64::consts::PI,
                            rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
                        )
                    })
                    .collect();
                let psi = pure_from_stars(&stars).unwrap();
                let mut got = majorana_constellation(&psi).unwrap();
                for want in &stars {
                    let (best, d) = got
                        .iter()
                        .enumerate()
                        .map(|(k, g)| (k, g.angle_to(want)))
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .unwrap();
                    assert!(d < 1e-8, "star not recovered (n = {n}, d = {d:.2e})");
                    got.swap_remove(best);
                }
            }
        }
    }

    #[test]
    fn pure_from_stars_is_rotation_covariant() {
        use crate::angular::{rotation_matrix, EulerAngles};
        use crate::constellation::{rotate_star, rotation_from_euler};
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let stars: Vec<Star> = (0..4)
                .map(|_| {
                    Star::new(
                        rng.gen::<f64>() * std::f64::consts::PI,
                        rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
                    )
                })
                .collect();
            let e = EulerAngles::new(
                rng.gen::<f64>() * 6.0 - 3.0,
                rng.gen::<f64>() * std::f64::consts::PI,
                rng.gen::<f64>() * 6.0 - 3.0,
            );
            let r = rotation_from_euler(e);
            let rotated_stars: Vec<Star> = stars.iter().map(|s| rotate_star(&r, s)).collect();
            let lhs = pure_from_stars(&rotated_stars).unwrap();
            let psi = pure_from_stars(&stars).unwrap();
            let u = rotation_matrix(psi.spin(), e);
            let rhs_amps = u.mul_vec(psi.amplitudes()).unwrap();
            let rhs = PureState::new_unnormalized(psi.spin(), rhs_amps).unwrap();
            assert!((lhs.overlap(&rhs) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn named_state_examples() {
        let two_s = SpinQN::from_two_s(2);
        let mm = named_state(NamedState::MaximallyMixed, two_s).unwrap();
        for i in 0..3 {
            assert!((mm.matrix()[(i, i)].re - 1.0 / 3.0).abs() < 1e-15);
        }

        // ghz at s = 3/2 is cat_q
        let two_s = SpinQN::from_two_s(3);
        let ghz = named_state(NamedState::Ghz, two_s).unwrap();
        let catq = named_state(NamedState::CatQ, two_s).unwrap();
        assert!(ghz.matrix().max_abs_diff(catq.matrix()) < 1e-15);

        assert!(named_state(NamedState::W, SpinQN::from_two_s(1)).is_err());
    }

    #[test]
    fn cat_difference_is_top_tensor_pair() {
        // cat_q - cat_c = ((-1)^{2s} T_{2s,2s} + T_{2s,-2s}) / 2
        use crate::angular::tensor_operator;
        for two_s in [2u32, 3, 4, 5] {
            let spin = SpinQN::from_two_s(two_s);
            let q = named_state(NamedState::CatQ, spin).unwrap();
            let c = named_state(NamedState::CatC, spin).unwrap();
            let diff = q.matrix().sub(c.matrix()).unwrap();
            let tp = tensor_operator(spin, two_s, two_s as i32).unwrap();
            let tm = tensor_operator(spin, two_s, -(two_s as i32)).unwrap();
            let sign = if two_s % 2 == 0 { 1.0 } else { -1.0 };
            let expect = tp
                .matrix
                .scale(Complex64::new(0.5 * sign, 0.0))
                .add(&tm.matrix.scale(Complex64::new(0.5, 0.0)))
                .unwrap();
            assert!(diff.max_abs_diff(&expect) < 1e-12, "two_s = {two_s}");
        }
    }

    #[test]
    fn oracle_trace_of_single_constituent_state() {
        let psi = dicke_state(SpinQN::from_two_s(1), 1).unwrap();
        let red = oracle_partial_trace(&psi.density(), 1).unwrap();
        assert_eq!(red.spin().two_s(), 0);
        assert!((red.matrix()[(0, 0)].re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn oracle_partial_trace_preserves_trace_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for two_s in [2u32, 3, 5] {
            let spin = SpinQN::from_two_s(two_s);
            for _ in 0..20 {
                let rho = random_density(spin, &mut rng);
                for k in 1..=two_s {
                    let red = oracle_partial_trace(&rho, k).unwrap();
                    assert!((red.trace() - 1.0).abs() < 1e-12);
                    let min = red.eigenvalues()[0];
                    assert!(min > -1e-10, "negative eigenvalue {min:.2e}");
                }
            }
        }
    }

    #[test]
    fn oracle_rejects_large_spins() {
        let spin = SpinQN::from_two_s(14);
        let mm = named_state(NamedState::MaximallyMixed, spin).unwrap();
        assert!(matches!(
            oracle_partial_trace(&mm, 1),
            Err(Error::SpinTooLargeForOracle { .. })
        ));
    }

    #[test]
    fn oracle_matrix_helpers() {
        let (sx, _, sz) = crate::spin::spin_operators(SpinQN::from_two_s(1));
        let sz2 = oracle_matrix_product(
            &sz.scale(Complex64::new(2.0, 0.0)),
            &sz.scale(Complex64::new(2.0, 0.0)),
        )
        .unwrap();
        assert!((oracle_trace(&sz2).re - 2.0).abs() < 1e-14);
        assert!((oracle_trace(&CMat::identity(5)).re - 5.0).abs() < 1e-15);
        let _ = sx;

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let psi = random_state(SpinQN::from_two_s(3), &mut rng);
        let id = CMat::identity(4);
        assert!((oracle_expectation(&psi, &id).unwrap().re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn ghz_reduction_is_classical_cat_reduction() {
        // after one constituent loss the GHZ and the classical cat agree
        let spin = SpinQN::from_two_s(3);
        let ghz = named_state(NamedState::Ghz, spin).unwrap();
        let catc = named_state(NamedState::CatC, spin).unwrap();
        let r1 = oracle_partial_trace(&ghz, 1).unwrap();
        let r2 = oracle_partial_trace(&catc, 1).unwrap();
        assert!(r1.matrix().max_abs_diff(r2.matrix()) < 1e-12);
    }

    #[test]
    fn contraction_matches_directional_derivative_semantics() {
        // <z| contraction of |s,s> leaves |s-1/2, s-1/2>
        let psi = pure_from_stars(&[Star::plus_z(); 3]).unwrap();
        let contracted = oracle_contract_constituent(&psi, &Star::plus_z()).unwrap();
        let norm: f64 = contracted.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.9);
        assert!((contracted[0].norm() / norm - 1.0).abs() < 1e-12);
    }
}
