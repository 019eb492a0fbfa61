//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot with a diagonal unitary and then
//! applies a real plane rotation. Pivots are visited row by row in a fixed order, so
//! results are bit-for-bit reproducible for a given input.

use num_complex::Complex64;

use super::{CMat, HermitianMatrix};
use crate::error::{ProjError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

fn off_norm_sq(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<Eigen> {
    let mut a = m.as_mat().clone();
    let n = a.nrows();
    let mut v = CMat::identity(n, n);
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: v });
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(Eigen { values: vec![0.0; n], vectors: v });
    }
    let target = (f64::EPSILON * scale) * (f64::EPSILON * scale);

    let mut sweep = 0;
    loop {
        let off = off_norm_sq(&a);
        if off <= target {
            break;
        }
        if sweep >= MAX_SWEEPS {
            return Err(ProjError::NoConvergence { sweeps: sweep, residual: off.sqrt() });
        }
        sweep += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // skip pivots that are negligible next to both diagonal entries
                if sweep > 3 && mag < f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = phase.conj() * (-s);
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}
