//! The T-representation: block decomposition over irreducible tensor
//! operators, radii, subconstellation classes, reconstruction, reduced
//! states with inherited constellations, positivity bounds, and antipodal
//! conjugation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::angular::tensor_operator;
use crate::constellation::{class_unit_vector, extract_class, Star, SubconstellationClass};
use crate::error::{Error, Result};
use crate::factorial::{big_factorial, sqrt_ratio};
use crate::linalg::hermitian_eigenvalues;
use crate::matrix::CMat;
use crate::quasiprob::husimi;
use crate::spin::{HermitianOp, SpinQN};
use crate::states::PureState;
use crate::Tolerances;

/// One rank-sigma block: its radius and its subconstellation class.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TRepBlock {
    pub sigma: u32,
    pub w: f64,
    pub class: SubconstellationClass,
}

/// Full stellar description of a Hermitian operator: the trace component
/// rho_00 plus one radius-and-class block per nonvanishing rank.
/// For density matrices the trace component is (2s+1)^{-1/2} and the radii
/// satisfy sum w^2 <= 2s/(2s+1).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TRep {
    pub two_s: u32,
    pub trace_component: f64,
    pub blocks: Vec<TRepBlock>,
}

impl TRep {
    pub fn spin(&self) -> SpinQN {
        SpinQN::from_two_s(self.two_s)
    }

    pub fn block(&self, sigma: u32) -> Option<&TRepBlock> {
        self.blocks.iter().find(|b| b.sigma == sigma)
    }

    /// Radius of the sigma block, 0 when the block is absent.
    pub fn radius(&self, sigma: u32) -> f64 {
        self.block(sigma).map_or(0.0, |b| b.w)
    }

    pub fn sum_w_squared(&self) -> f64 {
        self.blocks.iter().map(|b| b.w * b.w).sum()
    }
}

/// The (2 sigma + 1)-component block vector rho_{sigma mu} = Tr(rho T^dag),
/// mu descending. No class machinery; this is the raw projection.
pub fn block_vector(op: &HermitianOp, sigma: u32) -> Result<Vec<Complex64>> {
    let spin = op.spin();
    let mut v = Vec::with_capacity(2 * sigma as usize + 1);
    for mu in (-(sigma as i32)..=sigma as i32).rev() {
        let t = tensor_operator(spin, sigma, mu)?;
        v.push(t.matrix.hs_inner(op.matrix())?);
    }
    Ok(v)
}

/// Decompose a Hermitian operator into its T-representation.
pub fn decompose(op: &HermitianOp) -> Result<TRep> {
    decompose_with(op, &Tolerances::default())
}

pub fn decompose_with(op: &HermitianOp, tol: &Tolerances) -> Result<TRep> {
    let residual = op.matrix().hermiticity_residual();
    if residual > tol.hermiticity {
        return Err(Error::NotHermitian {
            residual,
            tol: tol.hermiticity,
        });
    }
    let spin = op.spin();
    let trace_component = op.trace() / (spin.dim() as f64).sqrt();
    let mut blocks = Vec::new();
    for sigma in 1..=spin.two_s() {
        let v = block_vector(op, sigma)?;
        let w: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if w < tol.absent_block {
            continue;
        }
        let unit: Vec<Complex64> = v.iter().map(|z| z / w).collect();
        let class = extract_class(&unit, tol)?;
        blocks.push(TRepBlock { sigma, w, class });
    }
    Ok(TRep {
        two_s: spin.two_s(),
        trace_component,
        blocks,
    })
}

/// Rebuild the operator from its T-representation.
pub fn reconstruct(t: &TRep) -> Result<HermitianOp> {
    let spin = t.spin();
    let dim = spin.dim();
    let mut m =
        CMat::identity(dim).scale(Complex64::new(t.trace_component / (dim as f64).sqrt(), 0.0));
    for block in &t.blocks {
        if block.class.representative.len() != block.sigma as usize {
            return Err(Error::InvalidArgument(format!(
                "block sigma = {} carries {} representative stars",
                block.sigma,
                block.class.representative.len()
            )));
        }
        let u = class_unit_vector(&block.class.representative)?;
        let sign = block.class.parity as f64;
        for (i, mu) in (-(block.sigma as i32)..=block.sigma as i32)
            .rev()
            .enumerate()
        {
            let coeff = u[i] * sign * block.w;
            if coeff.norm() == 0.0 {
                continue;
            }
            let top = tensor_operator(spin, block.sigma, mu)?;
            m = m.add(&top.matrix.scale(coeff))?;
        }
    }
    HermitianOp::with_tolerance(spin, m, 1e-9)
}

use crate::srep::reduction_factor;

/// Reduce a T-representation by `k` constituents, directly on the scalars:
/// blocks of rank above 2s' drop, surviving radii rescale by the product of
/// per-step factors, and the classes are inherited unchanged.
pub fn reduce(t: &TRep, k: u32) -> Result<TRep> {
    if k > t.two_s {
        return Err(Error::InvalidArgument(format!(
            "cannot remove {k} constituents from 2s = {}",
            t.two_s
        )));
    }
    let two_s_out = t.two_s - k;
    let trace = t.trace_component * ((t.two_s + 1) as f64).sqrt();
    let mut blocks = Vec::new();
    for block in &t.blocks {
        if block.sigma > two_s_out {
            continue;
        }
        let mut w = block.w;
        for step in 0..k {
            w *= reduction_factor(SpinQN::from_two_s(t.two_s - step), block.sigma);
        }
        if w < Tolerances::default().absent_block {
            continue;
        }
        blocks.push(TRepBlock {
            sigma: block.sigma,
            w,
            class: block.class.clone(),
        });
    }
    Ok(TRep {
        two_s: two_s_out,
        trace_component: trace / ((two_s_out + 1) as f64).sqrt(),
        blocks,
    })
}

/// Closed-form top-block radii (w_N) of the classical and quantum cat
/// states: even N gives ((2s)!/sqrt((4s)!), sqrt(1/2 + ((2s)!)^2/(4s)!)),
/// odd N gives (0, 1/sqrt(2)).
pub fn cat_radii(two_s: SpinQN) -> (f64, f64) {
    let n = two_s.two_s() as i64;
    if n % 2 == 0 {
        let ratio = BigRational::new(big_factorial(n) * big_factorial(n), big_factorial(2 * n));
        let wc = sqrt_ratio(&ratio);
        let wq = sqrt_ratio(&(BigRational::new(BigInt::from(1), BigInt::from(2)) + ratio));
        (wc, wq)
    } else {
        (0.0, std::f64::consts::FRAC_1_SQRT_2)
    }
}

/// Closed-form SC-state radii w_sigma = (2s)! sqrt((2 sigma + 1) /
/// ((2s+sigma+1)! (2s-sigma)!)).
pub fn sc_radius(two_s: SpinQN, sigma: u32) -> f64 {
    let n = two_s.two_s() as i64;
    let sigma = sigma as i64;
    sqrt_ratio(&BigRational::new(
        BigInt::from(2 * sigma + 1) * big_factorial(n) * big_factorial(n),
        big_factorial(n + sigma + 1) * big_factorial(n - sigma),
    ))
}

/// Positivity diagnostics of a T-representation.
#[derive(Clone, Copy, Debug)]
pub struct PositivityReport {
    pub sum_w_squared: f64,
    /// Necessary: sum w^2 <= 2s/(2s+1) (Tr rho^2 <= 1).
    pub purity_bound_ok: bool,
    /// Sufficient: sum w^2 <= 1/(2s(2s+1)) puts the state inside the ball
    /// around the maximally mixed state where every class is physical.
    pub mehta_ball: bool,
    /// Exact eigenvalue check on the reconstruction.
    pub eigen_positive: bool,
    pub min_eigenvalue: f64,
}

pub fn positivity_checks(t: &TRep) -> Result<PositivityReport> {
    let sum = t.sum_w_squared();
    let n = t.two_s as f64;
    let purity_bound_ok = sum <= n / (n + 1.0) + 1e-12;
    let mehta_ball = if t.two_s == 0 {
        t.blocks.is_empty()
    } else {
        sum <= 1.0 / (n * (n + 1.0)) + 1e-12
    };
    let op = reconstruct(t)?;
    let min_eigenvalue = hermitian_eigenvalues(op.matrix())[0];
    Ok(PositivityReport {
        sum_w_squared: sum,
        purity_bound_ok,
        mehta_ball,
        eigen_positive: min_eigenvalue >= -1e-10,
        min_eigenvalue,
    })
}

/// T-representation of A rho A^dag: odd-rank blocks flip parity, even ones
/// are untouched.
pub fn antipodal_conjugate(t: &TRep) -> TRep {
    let blocks = t
        .blocks
        .iter()
        .map(|b| {
            let mut class = b.class.clone();
            if b.sigma % 2 == 1 {
                class.parity = -class.parity;
            }
            TRepBlock {
                sigma: b.sigma,
                w: b.w,
                class,
            }
        })
        .collect();
    TRep {
        two_s: t.two_s,
        trace_component: t.trace_component,
        blocks,
    }
}

/// T-representation of a pure state's projector.
pub fn pure_state_classes(psi: &PureState) -> Result<TRep> {
    decompose(psi.density().op())
}

/// Recover the standard Majorana constellation of a pure state from the
/// top-rank class of its projector, by the Husimi-zero rule: for each
/// representative star n, a vanishing <n|rho|n> puts -n in the
/// constellation, otherwise n itself. When both poles of an axis are
/// Husimi zeros the star multiplicities are read off the roots of the
/// rank-one polynomial factor instead.
pub fn recover_constellation(
    rho: &HermitianOp,
    class: &SubconstellationClass,
) -> Result<Vec<Star>> {
    const ZERO_TOL: f64 = 1e-8;
    // cluster equal representative stars
    let mut groups: Vec<(Star, usize)> = Vec::new();
    'outer: for star in &class.representative {
        for (g, count) in groups.iter_mut() {
            if g.angle_to(star) < 1e-7 {
                *count += 1;
                continue 'outer;
            }
        }
        groups.push((*star, 1));
    }
    let mut out = Vec::with_capacity(class.representative.len());
    let mut factor_roots: Option<Vec<Star>> = None;
    for (star, count) in groups {
        let h_plus = husimi(rho, &star)?;
        let h_minus = husimi(rho, &star.antipode())?;
        if h_plus > ZERO_TOL {
            out.extend(std::iter::repeat_n(star, count));
        } else if h_minus > ZERO_TOL {
            out.extend(std::iter::repeat_n(star.antipode(), count));
        } else if count == 2 {
            // one star at each pole of the axis
            out.push(star);
            out.push(star.antipode());
        } else {
            // ambiguous split: consult the pure polynomial's roots
            let roots = match &factor_roots {
                Some(r) => r.clone(),
                None => {
                    let p = crate::polynomial::poly_from_operator(rho.matrix());
                    let q = crate::polynomial::pure_factor(&p)?;
                    let stars: Vec<Star> = q
                        .roots()?
                        .into_iter()
                        .map(crate::constellation::stereographic)
                        .collect();
                    factor_roots = Some(stars.clone());
                    stars
                }
            };
            let at_plus = roots.iter().filter(|r| r.angle_to(&star) < 1e-6).count();
            let at_minus = count - at_plus.min(count);
            out.extend(std::iter::repeat_n(star, at_plus.min(count)));
            out.extend(std::iter::repeat_n(star.antipode(), at_minus));
        }
    }
    Ok(out)
}
