use super::{c, hermitian_eigen, CMat, FinProjection, HermitianMatrix, TOL_RANK, TOL_SPEC};
use crate::error::{ProjError, Result};

/// Real interval with optional infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    /// `[lo, inf)`
    pub fn at_least(lo: f64) -> Self {
        Interval { lo, hi: f64::INFINITY, lo_closed: true, hi_closed: false }
    }

    /// `(-inf, hi)`
    pub fn below(hi: f64) -> Self {
        Interval { lo: f64::NEG_INFINITY, hi, lo_closed: false, hi_closed: false }
    }

    /// `[lo, hi)`
    pub fn half_open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: true, hi_closed: false }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let under = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && under
    }
}

pub fn spectral_projection(h: &HermitianMatrix, interval: Interval) -> Result<FinProjection> {
    spectral_projection_tol(h, interval, TOL_SPEC)
}

/// Spectral projection of `h` for `interval`. Refuses cuts that land within `tol` of an
/// eigenvalue.
pub fn spectral_projection_tol(h: &HermitianMatrix, interval: Interval, tol: f64) -> Result<FinProjection> {
    let e = hermitian_eigen(h)?;
    for &lam in &e.values {
        for end in [interval.lo, interval.hi] {
            if end.is_finite() && (lam - end).abs() <= tol {
                return Err(ProjError::AmbiguousCut { eigenvalue: lam, endpoint: end, tol });
            }
        }
    }
    let cols: Vec<usize> = (0..e.dim()).filter(|&k| interval.contains(e.values[k])).collect();
    let b = CMat::from_fn(h.dim(), cols.len(), |r, k| e.vectors[(r, cols[k])]);
    Ok(FinProjection::from_orthonormal(&b))
}

/// Orthonormal basis of the column span of `m`, keeping singular values above
/// `rel_tol * |m|`.
pub fn range_basis(m: &CMat, rel_tol: f64) -> CMat {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return CMat::zeros(rows, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return CMat::zeros(rows, 0);
    }
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > rel_tol * smax).collect();
    CMat::from_fn(rows, keep.len(), |r, k| u[(r, keep[k])])
}

pub fn range_projection(m: &CMat) -> FinProjection {
    FinProjection::from_orthonormal(&range_basis(m, TOL_RANK))
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.nrows() == m.ncols() && m == &m.adjoint() {
        if let Ok(e) = hermitian_eigen(&HermitianMatrix::from_upper(m)) {
            return e.min().abs().max(e.max().abs());
        }
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Norm of `m` restricted to the span of orthonormal columns `b`, i.e. `|m b|`.
pub fn restricted_norm(m: &CMat, b: &CMat) -> f64 {
    if b.ncols() == 0 {
        return 0.0;
    }
    let mb = m * b;
    let g = HermitianMatrix::from_upper(&(mb.adjoint() * mb));
    hermitian_eigen(&g).map(|e| e.max().max(0.0).sqrt()).unwrap_or(f64::NAN)
}

pub fn min_eig(h: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigen(h)?.min())
}

pub fn max_eig(h: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigen(h)?.max())
}

/// `a - b >= -tol I`.
pub fn psd_geq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> bool {
    if a.dim() == 0 {
        return true;
    }
    match hermitian_eigen(&a.sub(b)) {
        Ok(e) => e.min() >= -tol,
        Err(_) => false,
    }
}

/// `f(h)` through the eigendecomposition.
pub fn apply_fn(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let e = hermitian_eigen(h)?;
    let n = h.dim();
    let mut out = CMat::zeros(n, n);
    for k in 0..n {
        let fk = f(e.values[k]);
        if fk == 0.0 {
            continue;
        }
        let v = e.vectors.column(k);
        out += (&v * v.adjoint()) * c(fk);
    }
    Ok(HermitianMatrix::from_upper(&out))
}

/// Square root of a positive semidefinite matrix; eigenvalues below zero are clamped.
pub fn sqrt_psd(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_fn(h, |x| x.max(0.0).sqrt())
}

/// Inverse of `p h p` inside the corner `p M p`, returned as a full-size matrix that
/// vanishes off the range of `p`. Fails if the compression is not bounded below by `floor`.
pub fn corner_inverse(h: &HermitianMatrix, p: &FinProjection, floor: f64) -> Result<HermitianMatrix> {
    let b = p.basis();
    let comp = h.compress(&b);
    let e = hermitian_eigen(&comp)?;
    if b.ncols() > 0 && e.min() < floor {
        return Err(ProjError::Domain(format!("compression has eigenvalue {} below {floor}", e.min())));
    }
    let inv = apply_fn(&comp, |x| 1.0 / x)?;
    Ok(HermitianMatrix::from_upper(&(&b * inv.as_mat() * b.adjoint())))
}
