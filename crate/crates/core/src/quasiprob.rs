//! Husimi and multipole-truncated P quasiprobability functions, plus the
//! sphere quadrature used to verify their defining integrals.

use num_complex::Complex64;

use crate::constellation::Star;
use crate::error::Result;
use crate::factorial::{big_factorial, sqrt_ratio};
use crate::polynomial::{poly_from_operator, MajoranaPoly};
use crate::spin::HermitianOp;
use crate::trep::block_vector;
use num_rational::BigRational;

/// H(n) = <n| rho |n>. The polynomial is evaluated at the antipodal
/// representative z1 = cos(theta/2), z2 = -sin(theta/2) e^{-i phi}, which
/// turns the defining bra (a Bargmann coherent state of the opposite
/// direction) into exactly <n|.
pub fn husimi(rho: &HermitianOp, n: &Star) -> Result<f64> {
    Ok(husimi_from_poly(&poly_from_operator(rho.matrix()), n))
}

/// Husimi function evaluated directly on a Majorana polynomial.
pub fn husimi_from_poly(p: &MajoranaPoly, n: &Star) -> f64 {
    let z1 = Complex64::new((n.theta / 2.0).cos(), 0.0);
    let z2 = -Complex64::from_polar((n.theta / 2.0).sin(), -n.phi);
    p.eval(z1, z2).re
}

/// The unique P-function supported on multipoles up to rank 2s:
/// P(n) = sum_{sigma mu} K_sigma rho_{sigma mu} Y_{sigma mu}(n) with
/// K_sigma = sqrt((2s+sigma+1)! (2s-sigma)!) / (sqrt(4 pi) (2s)!); it
/// satisfies rho = integral P(n) |n><n| dOmega exactly.
#[derive(Clone, Debug)]
pub struct PFunction {
    /// per sigma: (K_sigma, block vector mu descending)
    terms: Vec<(f64, Vec<Complex64>)>,
}

impl PFunction {
    pub fn new(rho: &HermitianOp) -> Result<Self> {
        let two_s = rho.spin().two_s();
        let mut terms = Vec::with_capacity(two_s as usize + 1);
        for sigma in 0..=two_s {
            let k = p_multipole_weight(two_s, sigma);
            terms.push((k, block_vector(rho, sigma)?));
        }
        Ok(Self { terms })
    }

    pub fn eval(&self, n: &Star) -> f64 {
        let mut acc = Complex64::ZERO;
        for (sigma, (k, block)) in self.terms.iter().enumerate() {
            for (i, coeff) in block.iter().enumerate() {
                if coeff.norm() == 0.0 {
                    continue;
                }
                let mu = sigma as i32 - i as i32;
                acc += coeff * *k * spherical_harmonic(sigma as u32, mu, n.theta, n.phi);
            }
        }
        acc.re
    }
}

/// K_sigma = sqrt((2s+sigma+1)! (2s-sigma)!) / (sqrt(4 pi) (2s)!).
pub fn p_multipole_weight(two_s: u32, sigma: u32) -> f64 {
    let n = two_s as i64;
    let sigma = sigma as i64;
    let ratio = BigRational::new(
        big_factorial(n + sigma + 1) * big_factorial(n - sigma),
        big_factorial(n) * big_factorial(n),
    );
    sqrt_ratio(&ratio) / (4.0 * std::f64::consts::PI).sqrt()
}

/// P-function of an operator at one point.
pub fn p_function(rho: &HermitianOp, n: &Star) -> Result<f64> {
    Ok(PFunction::new(rho)?.eval(n))
}

/// Spherical harmonic Y_{l m}(theta, phi), Condon-Shortley phase.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    if m.unsigned_abs() > l {
        return Complex64::ZERO;
    }
    if m < 0 {
        let pos = spherical_harmonic(l, -m, theta, phi).conj();
        return if m % 2 == 0 { pos } else { -pos };
    }
    let m = m as u32;
    let x = theta.cos();
    let somx2 = theta.sin(); // sqrt(1 - x^2), nonnegative on [0, pi]
                             // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * somx2;
    }
    let plm = if l == m {
        pmm
    } else {
        // upward recurrence in l
        let mut p_prev = pmm;
        let mut p_curr = x * (2 * m + 1) as f64 * pmm;
        for ll in (m + 2)..=l {
            let p_next = (x * ((2 * ll - 1) as f64) * p_curr - ((ll + m - 1) as f64) * p_prev)
                / ((ll - m) as f64);
            p_prev = p_curr;
            p_curr = p_next;
        }
        p_curr
    };
    // normalization sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!)
    let lm = l as i64;
    let mm = m as i64;
    let norm = sqrt_ratio(&BigRational::new(
        num_bigint::BigInt::from(2 * lm + 1) * big_factorial(lm - mm),
        num_bigint::BigInt::from(4) * big_factorial(lm + mm),
    )) / std::f64::consts::PI.sqrt();
    Complex64::from_polar(1.0, m as f64 * phi) * (norm * plm)
}

/// Quadrature nodes and weights on the sphere: Gauss-Legendre in cos(theta)
/// crossed with a uniform azimuthal grid, exact for spherical harmonics up
/// to the requested degree. Weights are positive and sum to 4 pi.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    pub nodes: Vec<(Star, f64)>,
}

impl SphereGrid {
    /// A grid integrating all Y_{l m} with l <= max_degree exactly.
    pub fn gauss_legendre(max_degree: u32) -> Self {
        Self::with_rings((max_degree as usize) / 2 + 1, max_degree as usize + 1)
    }

    /// Explicit node counts: `n_theta` Gauss-Legendre rings in cos(theta)
    /// and `n_phi` uniform azimuths. Exact for spherical harmonics of
    /// degree up to min(2 n_theta - 1, n_phi - 1).
    pub fn with_rings(n_theta: usize, n_phi: usize) -> Self {
        let (xs, ws) = gauss_legendre_nodes(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for (&x, &w) in xs.iter().zip(&ws) {
            let theta = x.clamp(-1.0, 1.0).acos();
            for k in 0..n_phi {
                nodes.push((Star::new(theta, k as f64 * dphi), w * dphi));
            }
        }
        Self { nodes }
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }

    /// Integrate a function over the sphere.
    pub fn integrate<F: FnMut(&Star) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|(star, w)| w * f(star)).sum()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration from the
/// Chebyshev initial guess.
fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Evaluate a quasiprobability function on a grid, returning (star, value)
/// rows for dumping.
pub fn evaluate_on_grid<F: FnMut(&Star) -> Result<f64>>(
    grid: &SphereGrid,
    mut f: F,
) -> Result<Vec<(Star, f64)>> {
    grid.nodes
        .iter()
        .map(|(star, _)| Ok((*star, f(star)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::SpinQN;
    use crate::states::{named_state, pure_from_stars, NamedState};
    use crate::testutil::{random_density, random_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_weight_and_polynomial_exactness() {
        let grid = SphereGrid::gauss_legendre(10);
        assert!((grid.total_weight() - 4.0 * std::f64::consts::PI).abs() < 1e-10);
        // exact for cos^k(theta) up to the requested degree
        for k in [2u32, 6, 10] {
            let got = grid.integrate(|s| s.theta.cos().powi(k as i32));
            let expect = 4.0 * std::f64::consts::PI / (k as f64 + 1.0);
            assert!((got - expect).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn spherical_harmonics_low_orders() {
        let (theta, phi) = (0.8, 2.3);
        let y00 = spherical_harmonic(0, 0, theta, phi);
        assert!((y00.re - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
        let y10 = spherical_harmonic(1, 0, theta, phi);
        let expect = (3.0 / (4.0 * std::f64::consts::PI)).sqrt() * theta.cos();
        assert!((y10.re - expect).abs() < 1e-14);
        let y11 = spherical_harmonic(1, 1, theta, phi);
        let mag = (3.0 / (8.0 * std::f64::consts::PI)).sqrt() * theta.sin();
        let want = -Complex64::from_polar(mag, phi);
        assert!((y11 - want).norm() < 1e-14);
    }

    #[test]
    fn spherical_harmonics_orthonormal_under_grid() {
        let grid = SphereGrid::gauss_legendre(14);
        for (l1, m1, l2, m2) in [
            (3u32, 1i32, 3u32, 1i32),
            (5, -2, 5, -2),
            (4, 2, 6, 2),
            (3, 0, 5, 0),
            (7, 3, 7, -3),
        ] {
            let mut acc = Complex64::ZERO;
            for (star, w) in &grid.nodes {
                acc += spherical_harmonic(l1, m1, star.theta, star.phi).conj()
                    * spherical_harmonic(l2, m2, star.theta, star.phi)
                    * *w;
            }
            let expect = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert!(
                (acc - Complex64::new(expect, 0.0)).norm() < 1e-11,
                "({l1},{m1}) vs ({l2},{m2})"
            );
        }
    }

    #[test]
    fn husimi_examples() {
        // maximally mixed: 1/(2s+1) everywhere
        let spin = SpinQN::from_two_s(3);
        let mm = named_state(NamedState::MaximallyMixed, spin).unwrap();
        for star in [Star::plus_z(), Star::new(1.1, 0.3), Star::new(2.9, 4.0)] {
            assert!((husimi(mm.op(), &star).unwrap() - 0.25).abs() < 1e-13);
        }
        // |s,s><s,s|: 1 at +z, 0 at -z
        let sc = named_state(NamedState::SpinCoherent(Star::plus_z()), spin).unwrap();
        assert!((husimi(sc.op(), &Star::plus_z()).unwrap() - 1.0).abs() < 1e-13);
        assert!(husimi(sc.op(), &Star::minus_z()).unwrap().abs() < 1e-13);
    }

    #[test]
    fn husimi_matches_sc_overlap_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for two_s in [1u32, 3, 5] {
            let spin = SpinQN::from_two_s(two_s);
            let rho = random_density(spin, &mut rng);
            for _ in 0..20 {
                let n = Star::new(
                    rng.gen::<f64>() * std::f64::consts::PI,
                    rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
                );
                let ket = pure_from_stars(&vec![n; two_s as usize]).unwrap();
                let direct = crate::states::oracle_expectation(&ket, rho.matrix())
                    .unwrap()
                    .re;
                assert!((husimi(rho.op(), &n).unwrap() - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn husimi_vanishes_at_star_antipodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let psi = random_state(SpinQN::from_two_s(4), &mut rng);
        let rho = psi.density();
        for star in crate::states::majorana_constellation(&psi).unwrap() {
            assert!(husimi(rho.op(), &star.antipode()).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn husimi_normalization_and_rotation_covariance() {
        use crate::angular::{rotate_operator, EulerAngles};
        use crate::constellation::{rotate_star, rotation_from_euler};
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        let spin = SpinQN::from_two_s(3);
        let rho = random_density(spin, &mut rng);
        let grid = SphereGrid::gauss_legendre(2 * spin.two_s() + 2);
        let total = grid.integrate(|s| husimi(rho.op(), s).unwrap());
        assert!(((spin.dim() as f64) / (4.0 * std::f64::consts::PI) * total - 1.0).abs() < 1e-9);

        let e = EulerAngles::new(0.7, 1.9, -0.4);
        let rotated = rotate_operator(rho.op(), e);
        let r = rotation_from_euler(e);
        for _ in 0..10 {
            let n = Star::new(
                rng.gen::<f64>() * std::f64::consts::PI,
                rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
            );
            let lhs = husimi(&rotated, &rotate_star(&r, &n)).unwrap();
            let rhs = husimi(rho.op(), &n).unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn p_function_of_maximally_mixed() {
        let spin = SpinQN::from_two_s(4);
        let mm = named_state(NamedState::MaximallyMixed, spin).unwrap();
        let p = PFunction::new(mm.op()).unwrap();
        for star in [Star::plus_z(), Star::new(0.7, 1.3), Star::new(2.2, 5.1)] {
            assert!((p.eval(&star) - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn p_function_reconstructs_the_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        for two_s in [1u32, 2, 3] {
            let spin = SpinQN::from_two_s(two_s);
            let rho = random_density(spin, &mut rng);
            let p = PFunction::new(rho.op()).unwrap();
            let grid = SphereGrid::gauss_legendre(4 * two_s + 2);
            let dim = spin.dim();
            let mut acc = crate::matrix::CMat::zeros(dim);
            for (star, w) in &grid.nodes {
                let ket = pure_from_stars(&vec![*star; two_s as usize]).unwrap();
                let value = p.eval(star);
                for i in 0..dim {
                    for j in 0..dim {
                        acc[(i, j)] += Complex64::new(value * w, 0.0)
                            * ket.amplitudes()[i]
                            * ket.amplitudes()[j].conj();
                    }
                }
            }
            assert!(
                acc.max_abs_diff(rho.matrix()) < 1e-8,
                "P reconstruction failed at 2s = {two_s}"
            );
        }
    }

    #[test]
    fn reduced_state_p_is_the_truncation() {
        // multipole weights times block vectors agree between rho_k and rho
        use crate::states::oracle_partial_trace;
        let mut rng = ChaCha8Rng::seed_from_u64(94);
        for two_s in [3u32, 5] {
            let spin = SpinQN::from_two_s(two_s);
            let rho = random_density(spin, &mut rng);
            for k in 1..two_s {
                let reduced = oracle_partial_trace(rho.op(), k).unwrap();
                let two_k = two_s - k;
                for sigma in 0..=two_k {
                    let big = block_vector(rho.op(), sigma).unwrap();
                    let small = block_vector(&reduced, sigma).unwrap();
                    let kw_big = p_multipole_weight(two_s, sigma);
                    let kw_small = p_multipole_weight(two_k, sigma);
                    for (b, s) in big.iter().zip(&small) {
                        assert!(
                            (b * kw_big - s * kw_small).norm() < 1e-10,
                            "sigma = {sigma}, k = {k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn p_function_linearity_over_sc_mixtures() {
        // classical mixture of SC states: P is the mixture of P's
        let spin = SpinQN::from_two_s(2);
        let a = named_state(NamedState::SpinCoherent(Star::plus_z()), spin).unwrap();
        let b = named_state(NamedState::SpinCoherent(Star::new(1.2, 0.4)), spin).unwrap();
        let mixed = crate::spin::HermitianOp::new(
            spin,
            a.matrix()
                .scale(Complex64::new(0.3, 0.0))
                .add(&b.matrix().scale(Complex64::new(0.7, 0.0)))
                .unwrap(),
        )
        .unwrap();
        let pm = PFunction::new(&mixed).unwrap();
        let pa = PFunction::new(a.op()).unwrap();
        let pb = PFunction::new(b.op()).unwrap();
        for star in [Star::new(0.3, 0.0), Star::new(1.8, 2.2)] {
            assert!((pm.eval(&star) - 0.3 * pa.eval(&star) - 0.7 * pb.eval(&star)).abs() < 1e-12);
        }
    }
}
