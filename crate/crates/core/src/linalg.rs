//! Eigenvalue routines backing the geometry layer: Hermitian spectra for
//! positivity checks and companion-matrix eigenvalues for polynomial roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMat;

fn to_nalgebra(m: &CMat) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)])
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(to_nalgebra(m));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Dominant eigenpair of a positive-semidefinite Hermitian matrix, by power
/// iteration. Deterministic start vector; restarts on a degenerate start.
pub fn dominant_eigenpair_psd(m: &CMat) -> (f64, Vec<Complex64>) {
    let n = m.dim();
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0, 0.3 * (i as f64 + 1.0)))
        .collect();
    normalize(&mut v);
    let mut lambda = 0.0;
    for _ in 0..500 {
        let mut w = m.mul_vec(&v).expect("dimension checked");
        let norm = vec_norm(&w);
        if norm < 1e-300 {
            // start vector annihilated; perturb and retry
            v.iter_mut().enumerate().for_each(|(i, x)| {
                *x += Complex64::new((i as f64 + 0.7).sin(), (i as f64 + 0.2).cos())
            });
            normalize(&mut v);
            continue;
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let delta: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        v = w;
        lambda = norm;
        if delta < 1e-15 {
            break;
        }
    }
    (lambda, v)
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Finite roots of `sum_k coeffs[k] x^k` with a nonzero leading coefficient,
/// via the eigenvalues of the balanced companion matrix.
///
/// The variable is rescaled so that the extreme coefficients have comparable
/// magnitude, which is what keeps degenerate clusters (e.g. the doubly
/// degenerate cat-state roots) well-conditioned.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    debug_assert!(lead.norm() > 0.0, "caller must deflate the leading zeros");

    // Scale x = r*y with r = (|c0|/|cd|)^(1/deg) when that is meaningful.
    let c0 = coeffs[0].norm();
    let r = if c0 > 0.0 {
        let r = (c0 / lead.norm()).powf(1.0 / deg as f64);
        if r.is_finite() && r > 1e-8 && r < 1e8 {
            r
        } else {
            1.0
        }
    } else {
        1.0
    };

    // Monic coefficients of the scaled polynomial q(y) = p(r y) / (c_d r^deg).
    let mut monic = vec![Complex64::ZERO; deg];
    let mut rpow = 1.0;
    let scale = lead * r.powi(deg as i32);
    for (k, slot) in monic.iter_mut().enumerate() {
        *slot = coeffs[k] * rpow / scale;
        rpow *= r;
    }

    let mut comp = vec![Complex64::ZERO; deg * deg];
    for i in 1..deg {
        comp[i * deg + (i - 1)] = Complex64::ONE;
    }
    for i in 0..deg {
        comp[i * deg + (deg - 1)] = -monic[i];
    }

    let eigs = hessenberg_eigenvalues(comp, deg)?;
    Ok(eigs.into_iter().map(|z| z * r).collect())
}

/// Eigenvalues of a complex upper-Hessenberg matrix by the explicit
/// single-shift QR iteration with Wilkinson shifts. An occasional
/// exceptional shift breaks the stagnation QR suffers on matrices whose
/// eigenvalues share a modulus (companion matrices of z^n + c, degenerate
/// root clusters).
fn hessenberg_eigenvalues(mut h: Vec<Complex64>, n: usize) -> Result<Vec<Complex64>> {
    const EPS: f64 = 1e-15;
    let idx = |i: usize, j: usize| i * n + j;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stagnation = 0usize;
    let mut total = 0usize;
    let limit = 60 * n.max(4);
    loop {
        // deflate negligible subdiagonals
        for k in 1..=hi {
            let scale = h[idx(k - 1, k - 1)].norm() + h[idx(k, k)].norm();
            if h[idx(k, k - 1)].norm() <= EPS * scale.max(1e-300) {
                h[idx(k, k - 1)] = Complex64::ZERO;
            }
        }
        if hi == 0 {
            eigs.push(h[idx(0, 0)]);
            break;
        }
        if h[idx(hi, hi - 1)] == Complex64::ZERO {
            eigs.push(h[idx(hi, hi)]);
            hi -= 1;
            stagnation = 0;
            continue;
        }
        // isolate the trailing unreduced block lo..=hi
        let mut lo = hi;
        while lo > 0 && h[idx(lo, lo - 1)] != Complex64::ZERO {
            lo -= 1;
        }
        if total >= limit {
            return Err(Error::Numerical(
                "Hessenberg QR iteration did not converge".into(),
            ));
        }
        total += 1;
        stagnation += 1;

        // shift: Wilkinson from the trailing 2x2, exceptional when stuck
        let a = h[idx(hi - 1, hi - 1)];
        let b = h[idx(hi - 1, hi)];
        let c = h[idx(hi, hi - 1)];
        let d = h[idx(hi, hi)];
        let sigma = if stagnation.is_multiple_of(14) {
            d + c.norm() * Complex64::new(1.4656, 0.8123)
        } else {
            let tr = a + d;
            let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
            let l1 = (tr + disc) * 0.5;
            let l2 = (tr - disc) * 0.5;
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };

        // explicit shifted QR step on the block via complex Givens rotations
        for k in lo..=hi {
            h[idx(k, k)] -= sigma;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let f = h[idx(k, k)];
            let g = h[idx(k + 1, k)];
            let r = (f.norm_sqr() + g.norm_sqr()).sqrt();
            let (cc, ss) = if r < 1e-300 {
                (1.0, Complex64::ZERO)
            } else if f.norm() < 1e-300 {
                (0.0, Complex64::ONE)
            } else {
                (f.norm() / r, (f / f.norm()) * g.conj() / r)
            };
            rotations.push((cc, ss));
            // apply from the left to rows k, k+1
            for j in k..=hi {
                let x = h[idx(k, j)];
                let y = h[idx(k + 1, j)];
                h[idx(k, j)] = cc * x + ss * y;
                h[idx(k + 1, j)] = -ss.conj() * x + cc * y;
            }
        }
        for (k, (cc, ss)) in rotations.iter().enumerate().map(|(o, r)| (lo + o, r)) {
            // apply the adjoint from the right to columns k, k+1
            let row_end = (k + 2).min(hi + 1);
            for i in lo..row_end {
                let x = h[idx(i, k)];
                let y = h[idx(i, k + 1)];
                h[idx(i, k)] = cc * x + ss.conj() * y;
                h[idx(i, k + 1)] = -ss * x + cc * y;
            }
        }
        for k in lo..=hi {
            h[idx(k, k)] += sigma;
        }
    }
    Ok(eigs)
}
