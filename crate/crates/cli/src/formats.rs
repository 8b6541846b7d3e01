//! File formats: the state file (dense matrix as [re, im] pairs, row-major,
//! m descending), the T-representation JSON, the S-representation JSON, and
//! the polynomial debug dump. Floats are emitted in the serializer's
//! shortest round-trip form, so identical inputs produce identical bytes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use spinrep::constellation::{Star, SubconstellationClass};

use spinrep::matrix::CMat;
use spinrep::spin::{HermitianOp, SpinQN};
use spinrep::srep::SRepVector;
use spinrep::trep::{TRep, TRepBlock};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub two_s: u32,
    /// (2s+1)^2 entries, row-major.
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_matrix(two_s: SpinQN, m: &CMat) -> Self {
        Self {
            two_s: two_s.two_s(),
            matrix: m.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn spin(&self) -> SpinQN {
        SpinQN::from_two_s(self.two_s)
    }

    pub fn to_cmat(&self) -> Result<CMat, CliError> {
        let dim = self.two_s as usize + 1;
        if self.matrix.len() != dim * dim {
            return Err(CliError::Malformed(format!(
                "state file carries {} entries, expected {}",
                self.matrix.len(),
                dim * dim
            )));
        }
        let data = self
            .matrix
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        CMat::from_rows(dim, data).map_err(|e| CliError::Malformed(e.to_string()))
    }

    /// Validate hermiticity at the given gate and wrap.
    pub fn to_hermitian(&self, tol: f64) -> Result<HermitianOp, CliError> {
        let m = self.to_cmat()?;
        HermitianOp::with_tolerance(self.spin(), m, tol).map_err(CliError::from)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstellationJson {
    pub sigma: u32,
    pub stars: Vec<StarJson>,
    pub pairs: Vec<[usize; 2]>,
    pub representative: Vec<usize>,
    pub parity: i8,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StarJson {
    pub theta: f64,
    pub phi: f64,
}

impl ConstellationJson {
    /// Stars are listed representative-first per pair: indices 2k and 2k+1
    /// hold the k-th representative star and its antipode.
    pub fn from_class(class: &SubconstellationClass) -> Self {
        let mut stars = Vec::with_capacity(2 * class.representative.len());
        let mut pairs = Vec::new();
        let mut representative = Vec::new();
        for (k, star) in class.representative.iter().enumerate() {
            let anti = star.antipode();
            stars.push(StarJson {
                theta: star.theta,
                phi: star.phi,
            });
            stars.push(StarJson {
                theta: anti.theta,
                phi: anti.phi,
            });
            pairs.push([2 * k, 2 * k + 1]);
            representative.push(2 * k);
        }
        Self {
            sigma: class.sigma,
            stars,
            pairs,
            representative,
            parity: class.parity,
        }
    }

    pub fn to_class(&self) -> Result<SubconstellationClass, CliError> {
        if self.parity != 1 && self.parity != -1 {
            return Err(CliError::Malformed(format!(
                "parity {} is not +-1",
                self.parity
            )));
        }
        let representative = self
            .representative
            .iter()
            .map(|&i| {
                self.stars
                    .get(i)
                    .map(|s| Star::new(s.theta, s.phi))
                    .ok_or_else(|| {
                        CliError::Malformed(format!("representative index {i} out of range"))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if representative.len() != self.sigma as usize {
            return Err(CliError::Malformed(format!(
                "sigma = {} but {} representative stars",
                self.sigma,
                representative.len()
            )));
        }
        Ok(SubconstellationClass {
            sigma: self.sigma,
            representative,
            parity: self.parity,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TRepBlockJson {
    pub sigma: u32,
    pub w: f64,
    pub constellation: ConstellationJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TRepFile {
    pub two_s: u32,
    pub trace_component: f64,
    pub blocks: Vec<TRepBlockJson>,
}

impl TRepFile {
    pub fn from_trep(t: &TRep) -> Self {
        Self {
            two_s: t.two_s,
            trace_component: t.trace_component,
            blocks: t
                .blocks
                .iter()
                .map(|b| TRepBlockJson {
                    sigma: b.sigma,
                    w: b.w,
                    constellation: ConstellationJson::from_class(&b.class),
                })
                .collect(),
        }
    }

    pub fn to_trep(&self) -> Result<TRep, CliError> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                if b.sigma != b.constellation.sigma {
                    return Err(CliError::Malformed(format!(
                        "block sigma {} disagrees with constellation sigma {}",
                        b.sigma, b.constellation.sigma
                    )));
                }
                Ok(TRepBlock {
                    sigma: b.sigma,
                    w: b.w,
                    class: b.constellation.to_class()?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TRep {
            two_s: self.two_s,
            trace_component: self.trace_component,
            blocks,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SRepEntry {
    pub nu: [u32; 4],
    pub re: f64,
    pub im: f64,
}

pub fn srep_to_entries(v: &SRepVector) -> Vec<SRepEntry> {
    v.coeffs
        .iter()
        .map(|(nu, c)| SRepEntry {
            nu: [nu.nu0, nu.nu_minus, nu.nu_z, nu.nu_plus],
            re: c.re,
            im: c.im,
        })
        .collect()
}
