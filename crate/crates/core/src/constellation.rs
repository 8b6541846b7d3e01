//! Geometry layer: stars on the sphere, stereographic projection, roots of
//! block polynomials, the Möbius action of rotations on roots, antipodal
//! pairing, and subconstellation-class extraction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{tensor_operator, EulerAngles};
use crate::error::{Error, Result};
use crate::factorial::binomial_f64;
use crate::linalg::polynomial_roots;
use crate::states::pure_from_stars;
use crate::Tolerances;

/// A point on the unit sphere, polar angle in [0, pi], azimuth in [0, 2 pi).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Star {
    pub theta: f64,
    pub phi: f64,
}

impl Star {
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut phi = phi.rem_euclid(2.0 * std::f64::consts::PI);
        if !phi.is_finite() {
            phi = 0.0;
        }
        Self {
            theta: theta.clamp(0.0, std::f64::consts::PI),
            phi,
        }
    }

    pub fn plus_z() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn minus_z() -> Self {
        Self {
            theta: std::f64::consts::PI,
            phi: 0.0,
        }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    pub fn from_unit_vector(v: [f64; 3]) -> Self {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let theta = (v[2] / norm).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]);
        Self::new(theta, phi)
    }

    pub fn antipode(&self) -> Self {
        Self::new(
            std::f64::consts::PI - self.theta,
            self.phi + std::f64::consts::PI,
        )
    }

    /// Angular (geodesic) distance in radians; the atan2 form stays
    /// accurate for nearly parallel and nearly antiparallel directions.
    pub fn angle_to(&self, other: &Star) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let cross_norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        cross_norm.atan2(dot)
    }

    /// The spin-1/2 ket pointing along this star:
    /// cos(theta/2)|up> + sin(theta/2) e^{i phi} |down>.
    pub fn qubit(&self) -> [Complex64; 2] {
        [
            Complex64::new((self.theta / 2.0).cos(), 0.0),
            Complex64::from_polar((self.theta / 2.0).sin(), self.phi),
        ]
    }
}

/// A point of the extended complex plane C u {inf}. Roots at infinity arise
/// from deflated leading coefficients, one per missing top power.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    /// The antipodal point -1/conj(zeta); 0 and infinity swap.
    pub fn antipode(&self) -> Self {
        match self {
            ExtendedComplex::Infinity => ExtendedComplex::Finite(Complex64::ZERO),
            ExtendedComplex::Finite(z) if z.norm() == 0.0 => ExtendedComplex::Infinity,
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(-1.0 / z.conj()),
        }
    }
}

/// Stereographic projection from the south pole: zeta = tan(theta/2) e^{i phi}.
pub fn stereographic(zeta: ExtendedComplex) -> Star {
    match zeta {
        ExtendedComplex::Infinity => Star::minus_z(),
        ExtendedComplex::Finite(z) => Star::new(2.0 * z.norm().atan(), z.arg()),
    }
}

/// Inverse stereographic projection.
pub fn stereographic_inverse(star: &Star) -> ExtendedComplex {
    if star.theta >= std::f64::consts::PI {
        return ExtendedComplex::Infinity;
    }
    ExtendedComplex::Finite(Complex64::from_polar((star.theta / 2.0).tan(), star.phi))
}

/// Roots of the block polynomial
/// `sum_mu (-1)^{sigma-mu} sqrt(binom(2 sigma, sigma-mu)) v_mu zeta^{sigma+mu}`
/// for a (2 sigma + 1)-component block vector `v` (mu descending), padded
/// with one root at infinity per missing leading coefficient.
pub fn roots(v: &[Complex64]) -> Result<Vec<ExtendedComplex>> {
    if v.is_empty() || v.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "block vector must have odd length 2 sigma + 1, got {}",
            v.len()
        )));
    }
    let two_sigma = v.len() - 1;
    // coefficient of zeta^k with k = sigma + mu = 2 sigma - i
    let mut coeffs = vec![Complex64::ZERO; two_sigma + 1];
    for (i, &vi) in v.iter().enumerate() {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[two_sigma - i] = vi * sign * binomial_f64(two_sigma as u32, i as u32).sqrt();
    }

    let max_mag = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let cutoff = 1e-12 * max_mag;

    let mut hi = two_sigma;
    let mut n_inf = 0;
    while hi > 0 && coeffs[hi].norm() < cutoff {
        hi -= 1;
        n_inf += 1;
    }
    let mut lo = 0;
    let mut n_zero = 0;
    while lo < hi && coeffs[lo].norm() < cutoff {
        lo += 1;
        n_zero += 1;
    }
    if lo == hi && coeffs[hi].norm() < cutoff {
        return Err(Error::ZeroPolynomial);
    }

    let mut out = Vec::with_capacity(two_sigma);
    out.extend(std::iter::repeat_n(
        ExtendedComplex::Finite(Complex64::ZERO),
        n_zero,
    ));
    out.extend(std::iter::repeat_n(ExtendedComplex::Infinity, n_inf));
    if hi > lo {
        for z in polynomial_roots(&coeffs[lo..=hi])? {
            out.push(ExtendedComplex::Finite(z));
        }
    }
    debug_assert_eq!(out.len(), two_sigma);
    Ok(out)
}

/// Multiset of stars with a fixed expected cardinality.
#[derive(Clone, Debug)]
pub struct Constellation {
    pub stars: Vec<Star>,
}

impl Constellation {
    pub fn from_block_vector(v: &[Complex64]) -> Result<Self> {
        let stars = roots(v)?.into_iter().map(stereographic).collect();
        Ok(Self {
            stars: collapse_degenerate_clusters(stars),
        })
    }

    pub fn degree(&self) -> usize {
        self.stars.len()
    }
}

/// Scatter radius consistent with an m-fold degenerate root: coefficient
/// noise of order eps moves such a root by eps^(1/m), so computed clusters
/// of that size may spread this far and no farther.
fn degenerate_scatter_radius(m: usize) -> f64 {
    if m <= 1 {
        return f64::INFINITY;
    }
    (10.0 * 3e-14_f64.powf(1.0 / m as f64)).min(0.05)
}

/// Collapse root clusters whose spread is consistent with the conditioning
/// of a degenerate root, replacing each by its centroid with the original
/// multiplicity. Individual computed roots of an m-fold zero are only
/// eps^(1/m)-accurate, but their centroid is first-order accurate, so this
/// is what makes pairing and class extraction stable for states with
/// repeated stars. A false merge of genuinely distinct roots is caught
/// downstream by the class-overlap verification.
fn collapse_degenerate_clusters(stars: Vec<Star>) -> Vec<Star> {
    let n = stars.len();
    if n < 2 {
        return stars;
    }
    // single-linkage dendrogram by repeated closest-pair merging
    #[derive(Clone)]
    struct Node {
        members: Vec<usize>,
        diameter: f64,
        children: Option<(usize, usize)>,
    }
    let mut nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            members: vec![i],
            diameter: 0.0,
            children: None,
        })
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    while alive.len() > 1 {
        let mut best = (0usize, 1usize, f64::INFINITY);
        for a in 0..alive.len() {
            for b in a + 1..alive.len() {
                let mut d = f64::INFINITY;
                for &i in &nodes[alive[a]].members {
                    for &j in &nodes[alive[b]].members {
                        d = d.min(stars[i].angle_to(&stars[j]));
                    }
                }
                if d < best.2 {
                    best = (a, b, d);
                }
            }
        }
        let (a, b, _) = best;
        let (ia, ib) = (alive[a], alive[b]);
        let mut members = nodes[ia].members.clone();
        members.extend(&nodes[ib].members);
        let mut diameter: f64 = 0.0;
        for &i in &members {
            for &j in &members {
                diameter = diameter.max(stars[i].angle_to(&stars[j]));
            }
        }
        nodes.push(Node {
            members,
            diameter,
            children: Some((ia, ib)),
        });
        let new = nodes.len() - 1;
        alive.remove(b);
        alive.remove(a);
        alive.push(new);
    }
    // cut the tree at the maximal nodes whose spread fits their size
    let mut out = Vec::with_capacity(n);
    let mut stack = vec![alive[0]];
    while let Some(k) = stack.pop() {
        let node = &nodes[k];
        if node.diameter <= degenerate_scatter_radius(node.members.len()) {
            // centroid of the cluster, kept with multiplicity
            let mut acc = [0.0; 3];
            for &i in &node.members {
                let v = stars[i].unit_vector();
                for (a, b) in acc.iter_mut().zip(&v) {
                    *a += b;
                }
            }
            let centroid = Star::from_unit_vector(acc);
            out.extend(std::iter::repeat_n(centroid, node.members.len()));
        } else {
            let (l, r) = node
                .children
                .expect("non-singleton invalid node has children");
            stack.push(l);
            stack.push(r);
        }
    }
    out
}

/// Result of matching a constellation into antipodal pairs.
#[derive(Clone, Debug)]
pub struct Pairing {
    /// Index pairs (i, j): star j is the antipode of star i.
    pub pairs: Vec<(usize, usize)>,
    /// Largest angular mismatch over all pairs, radians.
    pub max_residual: f64,
}

/// Greedy minimal-angular-distance perfect matching of each star with the
/// negation of another. Fails when the best available match exceeds `tol`.
#[allow(clippy::needless_range_loop)]
pub fn antipodal_pairing(c: &Constellation, tol: f64) -> Result<Pairing> {
    let n = c.stars.len();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "cannot antipodally pair an odd number of stars ({n})"
        )));
    }
    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    let mut max_residual: f64 = 0.0;
    for _ in 0..n / 2 {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if used[i] {
                continue;
            }
            let anti = c.stars[i].antipode();
            for j in 0..n {
                if used[j] || j == i {
                    continue;
                }
                let d = anti.angle_to(&c.stars[j]);
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, d) = best.expect("even count leaves matchable stars");
        if d > tol {
            return Err(Error::PairingFailed { residual: d, tol });
        }
        used[i] = true;
        used[j] = true;
        max_residual = max_residual.max(d);
        pairs.push((i, j));
    }
    Ok(Pairing {
        pairs,
        max_residual,
    })
}

/// One of the two orientation classes of an antipodally symmetric
/// constellation: a canonical representative star per pair plus the sign of
/// the block vector relative to that representative. Flipping one
/// representative star flips the parity; flipping two preserves it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubconstellationClass {
    pub sigma: u32,
    pub representative: Vec<Star>,
    pub parity: i8,
}

const TIE_TOL: f64 = 1e-9;

/// Canonical orientation: pick the star with z > 0; ties broken by x > 0,
/// then y > 0. Deterministic so parity bits and file round-trips are stable.
fn canonical_of_pair(a: &Star, b: &Star) -> Star {
    let keys = |v: [f64; 3]| [v[2], v[0], v[1]];
    let ka = keys(a.unit_vector());
    let kb = keys(b.unit_vector());
    for axis in 0..3 {
        if ka[axis].abs() > TIE_TOL || kb[axis].abs() > TIE_TOL {
            return if ka[axis] >= kb[axis] { *a } else { *b };
        }
    }
    *a
}

fn sort_canonical(stars: &mut [Star]) {
    stars.sort_by(|a, b| {
        let va = a.unit_vector();
        let vb = b.unit_vector();
        let ka = [va[2], va[0], va[1]];
        let kb = [vb[2], vb[0], vb[1]];
        kb.iter()
            .zip(ka.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| !o.is_eq())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// Normalized block vector u of the subconstellation `rep`:
/// u_mu proportional to <phi| T^{(sigma/2) dagger}_{sigma mu} |phi> with
/// |phi> the spin-sigma/2 state whose Majorana constellation is `rep`,
/// normalized to unit norm (the closed-form prefactor is bypassed on
/// purpose; only the direction and sign matter).
pub fn class_unit_vector(rep: &[Star]) -> Result<Vec<Complex64>> {
    let sigma = rep.len() as u32;
    if sigma == 0 {
        return Err(Error::InvalidArgument("empty representative".into()));
    }
    let phi = pure_from_stars(rep)?;
    let spin = phi.spin();
    let mut u: Vec<Complex64> = Vec::with_capacity(2 * sigma as usize + 1);
    for mu in (-(sigma as i32)..=sigma as i32).rev() {
        let t = tensor_operator(spin, sigma, mu)?;
        let tv = t.matrix.adjoint().mul_vec(phi.amplitudes())?;
        u.push(
            phi.amplitudes()
                .iter()
                .zip(&tv)
                .map(|(a, b)| a.conj() * b)
                .sum(),
        );
    }
    let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Numerical("class vector collapsed to zero".into()));
    }
    u.iter_mut().for_each(|z| *z /= norm);
    Ok(u)
}

/// Hermiticity-symmetry residual of a block vector:
/// max_mu |v_mu - (-1)^mu conj(v_{-mu})|.
pub fn block_hermiticity_residual(v: &[Complex64]) -> f64 {
    let two_sigma = v.len() - 1;
    let sigma = two_sigma as i32 / 2;
    let mut r: f64 = 0.0;
    for (i, &vi) in v.iter().enumerate() {
        let mu = sigma - i as i32;
        let sign = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        r = r.max((vi - v[two_sigma - i].conj() * sign).norm());
    }
    r
}

/// Extract the subconstellation class of a unit-norm Hermitian-symmetric
/// block vector: roots, antipodal pairing, canonical representative, and
/// the +-1 sign from the overlap with the rebuilt unit vector.
pub fn extract_class(v: &[Complex64], tol: &Tolerances) -> Result<SubconstellationClass> {
    if v.len() < 3 || v.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(
            "class extraction needs a (2 sigma + 1)-vector with sigma >= 1".into(),
        ));
    }
    let sigma = (v.len() as u32 - 1) / 2;
    let herm = block_hermiticity_residual(v);
    if herm > 1e-8 {
        return Err(Error::NotHermitian {
            residual: herm,
            tol: 1e-8,
        });
    }
    let constellation = Constellation::from_block_vector(v)?;
    let pairing = antipodal_pairing(&constellation, tol.pairing)?;
    let mut rep: Vec<Star> = pairing
        .pairs
        .iter()
        .map(|&(i, j)| canonical_of_pair(&constellation.stars[i], &constellation.stars[j]))
        .collect();
    sort_canonical(&mut rep);

    let u = class_unit_vector(&rep)?;
    let overlap: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    if (overlap.norm() - 1.0).abs() > tol.class_overlap {
        return Err(Error::ClassExtractionFailed {
            overlap: overlap.norm(),
            tol: tol.class_overlap,
        });
    }
    let parity = if overlap.re >= 0.0 { 1 } else { -1 };
    Ok(SubconstellationClass {
        sigma,
        representative: rep,
        parity,
    })
}

/// Sign of `v` relative to an arbitrary (not necessarily canonical)
/// representative tuple. Used to check that classes transform rigidly.
pub fn class_parity_relative(v: &[Complex64], rep: &[Star], tol: &Tolerances) -> Result<i8> {
    let u = class_unit_vector(rep)?;
    let overlap: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    if (overlap.norm() - 1.0).abs() > tol.class_overlap {
        return Err(Error::ClassExtractionFailed {
            overlap: overlap.norm(),
            tol: tol.class_overlap,
        });
    }
    Ok(if overlap.re >= 0.0 { 1 } else { -1 })
}

// ---------------------------------------------------------------------------
// Rotations: SO(3) matrices, Euler angles, axis-angle, and the Möbius action.
// ---------------------------------------------------------------------------

pub type Rot3 = [[f64; 3]; 3];

pub fn rotation_from_euler(e: EulerAngles) -> Rot3 {
    let rz = |t: f64| -> Rot3 {
        [
            [t.cos(), -t.sin(), 0.0],
            [t.sin(), t.cos(), 0.0],
            [0.0, 0.0, 1.0],
        ]
    };
    let ry = |t: f64| -> Rot3 {
        [
            [t.cos(), 0.0, t.sin()],
            [0.0, 1.0, 0.0],
            [-t.sin(), 0.0, t.cos()],
        ]
    };
    mat_mul(&mat_mul(&rz(e.alpha), &ry(e.beta)), &rz(e.gamma))
}

pub fn mat_mul(a: &Rot3, b: &Rot3) -> Rot3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn rotate_star(r: &Rot3, star: &Star) -> Star {
    let v = star.unit_vector();
    let w = [
        r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
        r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
        r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
    ];
    Star::from_unit_vector(w)
}

/// zyz Euler angles of a rotation matrix.
pub fn euler_from_rotation(r: &Rot3) -> EulerAngles {
    let beta = r[2][2].clamp(-1.0, 1.0).acos();
    if r[2][2].abs() < 1.0 - 1e-12 {
        EulerAngles::new(r[1][2].atan2(r[0][2]), beta, r[2][1].atan2(-r[2][0]))
    } else if r[2][2] > 0.0 {
        EulerAngles::new(r[1][0].atan2(r[0][0]), 0.0, 0.0)
    } else {
        EulerAngles::new(r[1][0].atan2(-r[0][0]), std::f64::consts::PI, 0.0)
    }
}

/// Axis (as a star) and angle of a rotation matrix. Angle in [0, pi].
pub fn axis_angle_from_rotation(r: &Rot3) -> (Star, f64) {
    let trace = r[0][0] + r[1][1] + r[2][2];
    let cos_eta = ((trace - 1.0) / 2.0).clamp(-1.0, 1.0);
    let eta = cos_eta.acos();
    if eta < 1e-12 {
        return (Star::plus_z(), 0.0);
    }
    if std::f64::consts::PI - eta > 1e-6 {
        let s = 2.0 * eta.sin();
        let axis = [
            (r[2][1] - r[1][2]) / s,
            (r[0][2] - r[2][0]) / s,
            (r[1][0] - r[0][1]) / s,
        ];
        (Star::from_unit_vector(axis), eta)
    } else {
        // near pi: read the axis off the symmetric part
        let xx = ((r[0][0] + 1.0) / 2.0).max(0.0).sqrt();
        let yy = ((r[1][1] + 1.0) / 2.0).max(0.0).sqrt();
        let zz = ((r[2][2] + 1.0) / 2.0).max(0.0).sqrt();
        let mut axis = [xx, yy, zz];
        // fix relative signs against the largest component
        if xx >= yy && xx >= zz {
            axis[1] = axis[1].copysign(r[0][1] + r[1][0]);
            axis[2] = axis[2].copysign(r[0][2] + r[2][0]);
        } else if yy >= zz {
            axis[0] = axis[0].copysign(r[0][1] + r[1][0]);
            axis[2] = axis[2].copysign(r[1][2] + r[2][1]);
        } else {
            axis[0] = axis[0].copysign(r[0][2] + r[2][0]);
            axis[1] = axis[1].copysign(r[1][2] + r[2][1]);
        }
        (Star::from_unit_vector(axis), eta)
    }
}

/// The Möbius transformation on roots induced by the active rotation of
/// angle `eta` about `axis`: with the Cayley-Klein parameters
/// a = cos(eta/2) - i sin(eta/2) cos(Theta), b = -i sin(eta/2) sin(Theta)
/// e^{i Phi} of U(R) = exp(-i eta n.S), a root moves as
/// zeta' = (conj(a) zeta + b) / (-conj(b) zeta + a), handled projectively
/// so the poles flow through infinity.
pub fn mobius_rotate(zeta: ExtendedComplex, axis: &Star, eta: f64) -> ExtendedComplex {
    let (a, b) = cayley_klein(axis, eta);
    let (p, q) = match zeta {
        ExtendedComplex::Finite(z) => (z, Complex64::ONE),
        ExtendedComplex::Infinity => (Complex64::ONE, Complex64::ZERO),
    };
    let pp = a.conj() * p + b * q;
    let qq = -b.conj() * p + a * q;
    if qq.norm() <= 1e-14 * pp.norm() {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::Finite(pp / qq)
    }
}

/// Cayley-Klein parameters (a, b) of U(R) = exp(-i eta n.S).
pub fn cayley_klein(axis: &Star, eta: f64) -> (Complex64, Complex64) {
    let half = eta / 2.0;
    let a = Complex64::new(half.cos(), -half.sin() * axis.theta.cos());
    let b =
        Complex64::new(0.0, -half.sin() * axis.theta.sin()) * Complex64::from_polar(1.0, axis.phi);
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stereographic_special_points() {
        let z = stereographic(ExtendedComplex::Finite(Complex64::ZERO));
        assert!(z.theta.abs() < 1e-15);
        let one = stereographic(ExtendedComplex::Finite(Complex64::ONE));
        assert!((one.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(one.phi.abs() < 1e-15);
        let inf = stereographic(ExtendedComplex::Infinity);
        assert!((inf.theta - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn stereographic_round_trip_and_antipode() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = Complex64::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
            let star = stereographic(ExtendedComplex::Finite(z));
            match stereographic_inverse(&star) {
                ExtendedComplex::Finite(back) => assert!((back - z).norm() < 1e-12),
                ExtendedComplex::Infinity => panic!("finite point projected to infinity"),
            }
            // antipode rule: stereographic(-1/conj(z)) = -stereographic(z)
            let anti_star = stereographic(ExtendedComplex::Finite(z).antipode());
            assert!(anti_star.angle_to(&star.antipode()) < 1e-12);
        }
    }

    #[test]
    fn roots_of_pole_concentrated_block() {
        // only v_{sigma 0} nonzero: sigma roots at 0, sigma at infinity
        let sigma = 3usize;
        let mut v = vec![Complex64::ZERO; 2 * sigma + 1];
        v[sigma] = Complex64::ONE;
        let rr = roots(&v).unwrap();
        let zeros = rr
            .iter()
            .filter(|z| matches!(z, ExtendedComplex::Finite(w) if w.norm() < 1e-12))
            .count();
        let infs = rr
            .iter()
            .filter(|z| matches!(z, ExtendedComplex::Infinity))
            .count();
        assert_eq!((zeros, infs), (sigma, sigma));
    }

    #[test]
    fn roots_of_cat_blocks() {
        // odd N: top-block polynomial proportional to zeta^{4s} + 1 up to
        // signs; roots form a regular 4s-gon on the equator.
        // Build the block vector directly: v = ((-1)^{2s}, 0, ..., 0, 1)/sqrt(2)
        let two_s = 3u32; // s = 3/2, N = 3 odd
        let len = 2 * two_s as usize + 1;
        let mut v = vec![Complex64::ZERO; len];
        let s_sign = if two_s.is_multiple_of(2) { 1.0 } else { -1.0 };
        v[0] = Complex64::new(s_sign / 2.0_f64.sqrt(), 0.0);
        v[len - 1] = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        let rr = roots(&v).unwrap();
        assert_eq!(rr.len(), 2 * two_s as usize);
        for z in &rr {
            match z {
                ExtendedComplex::Finite(w) => assert!((w.norm() - 1.0).abs() < 1e-10),
                ExtendedComplex::Infinity => panic!("no roots at infinity expected"),
            }
        }
        // regular polygon: consecutive phase gaps of 2 pi / 4s
        let mut args: Vec<f64> = rr
            .iter()
            .map(|z| match z {
                ExtendedComplex::Finite(w) => w.arg().rem_euclid(2.0 * std::f64::consts::PI),
                _ => unreachable!(),
            })
            .collect();
        args.sort_by(f64::total_cmp);
        let step = 2.0 * std::f64::consts::PI / (2.0 * two_s as f64);
        for w in args.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-8);
        }
    }

    #[test]
    fn roots_of_even_cat_block_are_doubly_degenerate() {
        // even N: the top-block polynomial is proportional to
        // (zeta^{2s} + 1)^2, a 2s-gon with every root doubled. Build the
        // block vector of the quantum cat at 2s = 4 and check multiplicity.
        use crate::spin::SpinQN;
        use crate::states::{named_state, NamedState};
        use crate::trep::block_vector;
        let spin = SpinQN::from_two_s(4);
        let rho = named_state(NamedState::CatQ, spin).unwrap();
        let v = block_vector(rho.op(), 4).unwrap();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        let rr = roots(&unit).unwrap();
        assert_eq!(rr.len(), 8);
        let mut stars: Vec<Star> = rr.iter().map(|&z| stereographic(z)).collect();
        // each distinct position appears exactly twice
        let mut positions = Vec::new();
        while let Some(s) = stars.pop() {
            let partner = stars
                .iter()
                .position(|t| t.angle_to(&s) < 1e-6)
                .expect("every root has a degenerate partner");
            stars.remove(partner);
            positions.push(s);
        }
        assert_eq!(positions.len(), 4);
        // the distinct positions form the 2s-gon on the equator
        for p in &positions {
            assert!((p.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
        }
    }

    #[test]
    fn roots_rejects_zero_polynomial() {
        let v = vec![Complex64::ZERO; 3];
        assert!(matches!(roots(&v), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn mobius_pi_rotation_about_y() {
        let axis = Star::new(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        let eta = std::f64::consts::PI;
        // M(zeta) = -1/zeta: 0 -> inf, 1 -> -1, i -> i
        match mobius_rotate(ExtendedComplex::Finite(Complex64::ZERO), &axis, eta) {
            ExtendedComplex::Infinity => {}
            other => panic!("expected infinity, got {other:?}"),
        }
        match mobius_rotate(ExtendedComplex::Finite(Complex64::ONE), &axis, eta) {
            ExtendedComplex::Finite(z) => assert!((z + Complex64::ONE).norm() < 1e-14),
            _ => panic!("expected -1"),
        }
        match mobius_rotate(ExtendedComplex::Finite(Complex64::I), &axis, eta) {
            ExtendedComplex::Finite(z) => assert!((z - Complex64::I).norm() < 1e-14),
            _ => panic!("expected i"),
        }
    }

    #[test]
    fn mobius_identity_and_agreement_with_3d_rotation() {
        let axis = Star::new(0.7, 2.1);
        match mobius_rotate(
            ExtendedComplex::Finite(Complex64::new(0.3, -1.2)),
            &axis,
            0.0,
        ) {
            ExtendedComplex::Finite(z) => {
                assert!((z - Complex64::new(0.3, -1.2)).norm() < 1e-14)
            }
            _ => panic!(),
        }

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let axis = Star::new(
                rng.gen::<f64>() * std::f64::consts::PI,
                rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
            );
            let eta = rng.gen::<f64>() * 6.0 - 3.0;
            let star = Star::new(
                rng.gen::<f64>() * std::f64::consts::PI,
                rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
            );
            let zeta = stereographic_inverse(&star);
            let moved = stereographic(mobius_rotate(zeta, &axis, eta));
            // rotate the 3-vector with the Rodrigues formula
            let n = axis.unit_vector();
            let v = star.unit_vector();
            let cross = [
                n[1] * v[2] - n[2] * v[1],
                n[2] * v[0] - n[0] * v[2],
                n[0] * v[1] - n[1] * v[0],
            ];
            let dot: f64 = n.iter().zip(&v).map(|(a, b)| a * b).sum();
            let mut w = [0.0; 3];
            for k in 0..3 {
                w[k] = v[k] * eta.cos() + cross[k] * eta.sin() + n[k] * dot * (1.0 - eta.cos());
            }
            let expect = Star::from_unit_vector(w);
            assert!(
                moved.angle_to(&expect) < 1e-10,
                "Mobius and 3D rotation disagree"
            );
        }
    }

    #[test]
    fn pairing_of_pole_pairs() {
        let c = Constellation {
            stars: vec![
                Star::plus_z(),
                Star::plus_z(),
                Star::minus_z(),
                Star::minus_z(),
            ],
        };
        let p = antipodal_pairing(&c, 1e-6).unwrap();
        assert_eq!(p.pairs.len(), 2);
        assert!(p.max_residual < 1e-12);
        for &(i, j) in &p.pairs {
            assert!(c.stars[i].angle_to(&c.stars[j].antipode()) < 1e-12);
        }
    }

    #[test]
    fn pairing_survives_small_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let mut stars = Vec::new();
            for _ in 0..3 {
                let s = Star::new(
                    rng.gen::<f64>() * std::f64::consts::PI,
                    rng.gen::<f64>() * 2.0 * std::f64::consts::PI,
                );
                stars.push(s);
                let a = s.antipode();
                stars.push(Star::new(a.theta + 1e-9 * rng.gen::<f64>(), a.phi));
            }
            let p = antipodal_pairing(&Constellation { stars }, 1e-6).unwrap();
            assert!(p.max_residual < 1e-7);
        }
    }

    #[test]
    fn pairing_fails_on_asymmetric_input() {
        let c = Constellation {
            stars: vec![Star::plus_z(), Star::new(1.0, 0.3)],
        };
        assert!(matches!(
            antipodal_pairing(&c, 1e-6),
            Err(Error::PairingFailed { .. })
        ));
    }

    #[test]
    fn bloch_class_is_along_r() {
        // s=1/2 block vector for Bloch vector r: (-rx + i ry, sqrt2 rz, rx + i ry)/(sqrt2 r)
        let (theta, phi) = (0.9, 2.5);
        let dir = Star::new(theta, phi);
        let [x, y, z] = dir.unit_vector();
        let norm = 2.0_f64.sqrt();
        let v = vec![
            Complex64::new(-x, y) / norm,
            Complex64::new(2.0_f64.sqrt() * z, 0.0) / norm,
            Complex64::new(x, y) / norm,
        ];
        let class = extract_class(&v, &Tolerances::default()).unwrap();
        assert_eq!(class.sigma, 1);
        assert_eq!(class.representative.len(), 1);
        // canonical representative has z > 0; our direction does too
        assert!(class.representative[0].angle_to(&dir) < 1e-9);
        assert_eq!(class.parity, 1);

        // the negated vector: same pairs, opposite parity
        let vneg: Vec<Complex64> = v.iter().map(|w| -w).collect();
        let class2 = extract_class(&vneg, &Tolerances::default()).unwrap();
        assert!(class2.representative[0].angle_to(&dir) < 1e-9);
        assert_eq!(class2.parity, -1);
    }

    #[test]
    fn flipping_one_star_flips_parity() {
        let rep = vec![Star::new(0.4, 0.2), Star::new(1.2, 3.0)];
        let u = class_unit_vector(&rep).unwrap();
        let flipped = vec![rep[0].antipode(), rep[1]];
        let tol = Tolerances::default();
        assert_eq!(class_parity_relative(&u, &flipped, &tol).unwrap(), -1);
        let doubly = vec![rep[0].antipode(), rep[1].antipode()];
        assert_eq!(class_parity_relative(&u, &doubly, &tol).unwrap(), 1);
    }

    #[test]
    fn hermitian_blocks_always_pair() {
        // blocks of Hermitian operators have antipodally symmetric
        // constellations; pairing must never fail on them
        use crate::spin::SpinQN;
        use crate::testutil::random_hermitian;
        use crate::trep::block_vector;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut tested = 0;
        for two_s in 1..=8u32 {
            let spin = SpinQN::from_two_s(two_s);
            for _ in 0..125 {
                let h = random_hermitian(spin, &mut rng);
                for sigma in 1..=two_s {
                    let v = block_vector(&h, sigma).unwrap();
                    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if norm < 1e-12 {
                        continue;
                    }
                    let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
                    let c = Constellation::from_block_vector(&unit).unwrap();
                    antipodal_pairing(&c, 1e-6).expect("Hermitian block failed to pair");
                }
                tested += 1;
            }
        }
        assert_eq!(tested, 1000);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn root_coefficient_round_trip() {
        // rebuild the block polynomial from the computed roots and compare
        // to the input coefficients up to one global complex scale
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for sigma in 1..=8usize {
            for _ in 0..10 {
                let mut v: Vec<Complex64> = vec![Complex64::ZERO; 2 * sigma + 1];
                // random Hermitian-symmetric block vector
                for i in 0..=sigma {
                    let z = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                    let mu = sigma as i32 - i as i32;
                    v[i] = z;
                    let sign = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    v[2 * sigma - i] = z.conj() * sign;
                }
                if sigma % 2 == 0 {
                    let mid = v[sigma];
                    v[sigma] = Complex64::new(mid.re, 0.0);
                }
                let rr = roots(&v).unwrap();
                // monic product over finite roots, degree reduced by the
                // number at infinity
                let mut poly = vec![Complex64::ONE];
                let mut n_inf = 0;
                for z in &rr {
                    match z {
                        ExtendedComplex::Infinity => n_inf += 1,
                        ExtendedComplex::Finite(zeta) => {
                            let mut next = vec![Complex64::ZERO; poly.len() + 1];
                            for (k, &c) in poly.iter().enumerate() {
                                next[k + 1] += c;
                                next[k] -= zeta * c;
                            }
                            poly = next;
                        }
                    }
                }
                // compare against the input coefficients of the same degrees
                let coeffs: Vec<Complex64> = (0..=2 * sigma)
                    .map(|k| {
                        let i = 2 * sigma - k;
                        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                        v[i] * sign * binomial_f64(2 * sigma as u32, i as u32).sqrt()
                    })
                    .collect();
                let lead = coeffs[2 * sigma - n_inf];
                let mut worst: f64 = 0.0;
                for (k, &c) in poly.iter().enumerate() {
                    worst = worst.max((c * lead - coeffs[k]).norm());
                }
                for k in (2 * sigma - n_inf + 1)..=(2 * sigma) {
                    worst = worst.max(coeffs[k].norm());
                }
                assert!(
                    worst < 1e-8,
                    "sigma = {sigma}: round trip off by {worst:.2e}"
                );
            }
        }
    }

    #[test]
    fn collapse_merges_only_degenerate_scatter() {
        // a triple cluster with eps^(1/3)-scale scatter collapses to its
        // centroid; well-separated stars survive untouched
        let spread = 4e-6;
        let base = Star::new(1.1, 0.4);
        let stars = vec![
            Star::new(base.theta + spread, base.phi),
            Star::new(base.theta - spread, base.phi),
            Star::new(base.theta, base.phi + spread),
            Star::new(2.4, 3.0),
        ];
        let collapsed = collapse_degenerate_clusters(stars);
        assert_eq!(collapsed.len(), 4);
        let near_base = collapsed
            .iter()
            .filter(|s| s.angle_to(&base) < 1e-5)
            .count();
        assert_eq!(near_base, 3);
        // the three copies are identical after collapsing
        let merged: Vec<&Star> = collapsed
            .iter()
            .filter(|s| s.angle_to(&base) < 1e-5)
            .collect();
        assert!(merged[0].angle_to(merged[1]) < 1e-14);
        assert!(merged[0].angle_to(merged[2]) < 1e-14);
        // distinct stars stay where they were
        assert!(collapsed
            .iter()
            .any(|s| s.angle_to(&Star::new(2.4, 3.0)) < 1e-14));
    }

    #[test]
    fn euler_axis_angle_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let e = EulerAngles::new(
                rng.gen::<f64>() * 6.0 - 3.0,
                rng.gen::<f64>() * std::f64::consts::PI,
                rng.gen::<f64>() * 6.0 - 3.0,
            );
            let r = rotation_from_euler(e);
            let back = rotation_from_euler(euler_from_rotation(&r));
            for i in 0..3 {
                for j in 0..3 {
                    assert!((r[i][j] - back[i][j]).abs() < 1e-10);
                }
            }
            let (axis, eta) = axis_angle_from_rotation(&r);
            // rebuild via Rodrigues and compare
            let n = axis.unit_vector();
            let mut rr = [[0.0; 3]; 3];
            let (c, s) = (eta.cos(), eta.sin());
            for i in 0..3 {
                for j in 0..3 {
                    let eps = |i: usize, j: usize, k: usize| -> f64 {
                        match (i, j, k) {
                            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                            (2, 1, 0) | (0, 2, 1) | (1, 0, 2) => -1.0,
                            _ => 0.0,
                        }
                    };
                    let delta = if i == j { 1.0 } else { 0.0 };
                    let cross: f64 = (0..3).map(|k| -eps(i, j, k) * n[k]).sum();
                    rr[i][j] = c * delta + s * cross + (1.0 - c) * n[i] * n[j];
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    assert!((r[i][j] - rr[i][j]).abs() < 1e-9);
                }
            }
        }
    }
}
