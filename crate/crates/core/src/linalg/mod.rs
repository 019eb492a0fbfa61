//! Dense complex Hermitian spectral calculus.

mod jacobi;
mod ops;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{ProjError, Result};

pub use jacobi::{hermitian_eigen, Eigen};
pub use ops::*;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const TOL_PROJ: f64 = 1e-8;
pub const TOL_RANK: f64 = 1e-8;
pub const TOL_SPEC: f64 = 1e-10;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Hermitian matrix. Only the upper triangle of the input is read; the lower triangle
/// is its mirror, so symmetry holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMat);

impl HermitianMatrix {
    /// Builds from the upper triangle of `m` without checking the lower one.
    pub fn from_upper(m: &CMat) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols(), "hermitian matrix must be square");
        let mut h = CMat::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let z = if i == j { c(m[(i, i)].re) } else { m[(i, j)] };
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        HermitianMatrix(h)
    }

    /// Checks `m` against its adjoint (relative to its size) and keeps the upper triangle.
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(ProjError::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        let dev = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if dev > 1e-9 * scale {
            return Err(ProjError::NotHermitian(dev));
        }
        Ok(Self::from_upper(&m))
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let n = d.len();
        HermitianMatrix(CMat::from_fn(n, n, |i, j| if i == j { c(d[i]) } else { c(0.0) }))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(CMat::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(CMat::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &CMat {
        &self.0
    }

    pub fn into_mat(self) -> CMat {
        self.0
    }

    pub fn shifted(&self, t: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += c(t);
        }
        HermitianMatrix(m)
    }

    pub fn scaled(&self, t: f64) -> Self {
        HermitianMatrix(self.0.map(|z| z * t))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix::from_upper(&(&self.0 - &other.0))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix::from_upper(&(&self.0 + &other.0))
    }

    /// `b* self b` for a column block `b`.
    pub fn compress(&self, b: &CMat) -> HermitianMatrix {
        HermitianMatrix::from_upper(&(b.adjoint() * &self.0 * b))
    }

    pub fn eigen(&self) -> Result<Eigen> {
        hermitian_eigen(self)
    }
}

/// Orthogonal projection, checked to be idempotent within a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct FinProjection(HermitianMatrix);

impl FinProjection {
    pub fn new(m: CMat) -> Result<Self> {
        Self::with_tol(m, TOL_PROJ)
    }

    pub fn with_tol(m: CMat, tol: f64) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let sq = h.as_mat() * h.as_mat();
        let dev = (&sq - h.as_mat()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > tol {
            return Err(ProjError::NotProjection(format!("|P^2 - P| entry deviation {dev:e}")));
        }
        Ok(FinProjection(h))
    }

    /// Projection onto the span of orthonormal columns.
    pub fn from_orthonormal(b: &CMat) -> Self {
        FinProjection(HermitianMatrix::from_upper(&(b * b.adjoint())))
    }

    pub fn zeros(n: usize) -> Self {
        FinProjection(HermitianMatrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        FinProjection(HermitianMatrix::identity(n))
    }

    /// Rank-one projection onto the line through a nonzero vector.
    pub fn line(v: &CVec) -> Self {
        let nv = v.norm();
        let u = v / c(nv);
        FinProjection(HermitianMatrix::from_upper(&(&u * u.adjoint())))
    }

    pub fn basis_vector(n: usize, i: usize) -> Self {
        let mut v = CVec::zeros(n);
        v[i] = c(1.0);
        Self::line(&v)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn as_mat(&self) -> &CMat {
        self.0.as_mat()
    }

    pub fn rank(&self) -> usize {
        let tr: f64 = (0..self.dim()).map(|i| self.as_mat()[(i, i)].re).sum();
        tr.round().max(0.0) as usize
    }

    pub fn complement(&self) -> Self {
        let n = self.dim();
        FinProjection(HermitianMatrix::identity(n).sub(&self.0))
    }

    /// Orthonormal basis of the range, as columns.
    pub fn basis(&self) -> CMat {
        let e = match self.0.eigen() {
            Ok(e) => e,
            Err(_) => return CMat::zeros(self.dim(), 0),
        };
        let cols: Vec<usize> = (0..e.dim()).filter(|&k| e.values[k] > 0.5).collect();
        CMat::from_fn(self.dim(), cols.len(), |r, k| e.vectors[(r, cols[k])])
    }
}
