//! Canonical decomposition of a pair of projections and the metrics derived from it.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{ProjError, Result};
use crate::linalg::{hermitian_eigen, CMat, FinProjection};

pub const TOL_ANGLE_SQ: f64 = 1e-12;
pub const ANGLE_CLUSTER: f64 = 1e-8;

/// Corner dimensions `M∩N, M∩N⊥, M⊥∩N, M⊥∩N⊥` and the generic principal angles
/// (ascending, repeated by multiplicity) of the pair `(p, q)` with `M = ran p`, `N = ran q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDecomposition {
    pub dim_11: usize,
    pub dim_10: usize,
    pub dim_01: usize,
    pub dim_00: usize,
    pub generic_angles: Vec<f64>,
}

impl PairDecomposition {
    pub fn ambient_dim(&self) -> usize {
        self.dim_11 + self.dim_10 + self.dim_01 + self.dim_00 + 2 * self.generic_angles.len()
    }

    pub fn norm_distance(&self) -> f64 {
        if self.dim_10 > 0 || self.dim_01 > 0 {
            1.0
        } else {
            self.generic_angles.last().map(|t| t.sin()).unwrap_or(0.0)
        }
    }

    /// Smallest generic angle; `pi/2` when there is no generic part.
    pub fn angle(&self) -> f64 {
        self.generic_angles.first().copied().unwrap_or(FRAC_PI_2)
    }

    /// Distinct generic angles with multiplicities, clustered at `tol`.
    pub fn distinct_angles(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &t in &self.generic_angles {
            match out.last_mut() {
                Some((a, m)) if (t - *a).abs() <= tol => *m += 1,
                _ => out.push((t, 1)),
            }
        }
        out
    }

    pub fn swapped(&self) -> Self {
        PairDecomposition {
            dim_11: self.dim_11,
            dim_10: self.dim_01,
            dim_01: self.dim_10,
            dim_00: self.dim_00,
            generic_angles: self.generic_angles.clone(),
        }
    }
}

fn corner_spectrum(outer: &FinProjection, q: &FinProjection) -> Result<Vec<f64>> {
    let b = outer.basis();
    if b.ncols() == 0 {
        return Ok(vec![]);
    }
    Ok(hermitian_eigen(&q.as_hermitian().compress(&b))?.values)
}

pub fn decompose_pair(p: &FinProjection, q: &FinProjection) -> Result<PairDecomposition> {
    decompose_pair_tol(p, q, TOL_ANGLE_SQ)
}

/// Decomposition with eigenvalues of `pqp` classified as 0 or 1 when within `tol_sq`.
pub fn decompose_pair_tol(p: &FinProjection, q: &FinProjection, tol_sq: f64) -> Result<PairDecomposition> {
    if p.dim() != q.dim() {
        return Err(ProjError::Dimension(format!("pair of sizes {} and {}", p.dim(), q.dim())));
    }
    let mu = corner_spectrum(p, q)?;
    let nu = corner_spectrum(&p.complement(), q)?;

    let mut dim_11 = 0;
    let mut dim_10 = 0;
    let mut generic = Vec::new();
    for &m in &mu {
        if m >= 1.0 - tol_sq {
            dim_11 += 1;
        } else if m <= tol_sq {
            dim_10 += 1;
        } else {
            generic.push(m.sqrt().clamp(0.0, 1.0).acos());
        }
    }
    let mut dim_01 = 0;
    let mut dim_00 = 0;
    let mut generic_other = 0;
    let mut stray = None;
    for &v in &nu {
        if v >= 1.0 - tol_sq {
            dim_01 += 1;
        } else if v <= tol_sq {
            dim_00 += 1;
        } else {
            generic_other += 1;
            stray = Some(v);
        }
    }
    if generic_other != generic.len() {
        let value = stray.or_else(|| generic.first().map(|t: &f64| t.cos().powi(2))).unwrap_or(0.0);
        return Err(ProjError::NearDegenerate { value });
    }
    generic.sort_by(f64::total_cmp);
    Ok(PairDecomposition { dim_11, dim_10, dim_01, dim_00, generic_angles: generic })
}

/// Decomposition of the pair of subspaces spanned by orthonormal columns `bp`, `bq` in a
/// space of dimension `ambient`, from the singular values of `bp* bq`.
pub fn decompose_subspaces(bp: &CMat, bq: &CMat, ambient: usize, tol_sq: f64) -> Result<PairDecomposition> {
    if bp.nrows() != bq.nrows() || bp.nrows() > ambient {
        return Err(ProjError::Dimension(format!(
            "subspaces in {} and {} rows, ambient {ambient}",
            bp.nrows(),
            bq.nrows()
        )));
    }
    let (rp, rq) = (bp.ncols(), bq.ncols());
    let mut dim_11 = 0;
    let mut generic = Vec::new();
    if rp > 0 && rq > 0 {
        for sv in (bp.adjoint() * bq).singular_values().iter() {
            let c2 = sv * sv;
            if c2 >= 1.0 - tol_sq {
                dim_11 += 1;
            } else if c2 > tol_sq {
                generic.push(sv.clamp(0.0, 1.0).acos());
            }
        }
    }
    let g = generic.len();
    let dim_10 = rp - dim_11 - g;
    let dim_01 = rq - dim_11 - g;
    let used = dim_11 + dim_10 + dim_01 + 2 * g;
    if used > ambient {
        return Err(ProjError::NearDegenerate { value: generic.first().map(|t| t.cos().powi(2)).unwrap_or(0.0) });
    }
    generic.sort_by(f64::total_cmp);
    Ok(PairDecomposition { dim_11, dim_10, dim_01, dim_00: ambient - used, generic_angles: generic })
}

pub fn pair_norm_distance(p: &FinProjection, q: &FinProjection) -> Result<f64> {
    Ok(decompose_pair(p, q)?.norm_distance())
}

/// `arcsin |p - q|`.
pub fn d_a(p: &FinProjection, q: &FinProjection) -> Result<f64> {
    Ok(pair_norm_distance(p, q)?.clamp(0.0, 1.0).asin())
}

pub fn angle(p: &FinProjection, q: &FinProjection) -> Result<f64> {
    Ok(decompose_pair(p, q)?.angle())
}
