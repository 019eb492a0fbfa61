//! Limit estimation for slowly converging sequences.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    Converged,
    PowerLaw,
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitFit {
    pub limit: f64,
    /// Half-width of the reported interval around `limit`.
    pub error: f64,
    /// RMS residual of the log-difference fit (0 when not fitted).
    pub residual: f64,
    pub method: FitMethod,
    /// The tail decreased beyond tolerance somewhere.
    pub unreliable: bool,
}

const FLAT: f64 = 1e-12;
const MONOTONE_TOL: f64 = 1e-9;
const MAX_RESIDUAL: f64 = 0.5;

/// Estimates `lim y` for samples `y_k` at increasing positions `x_k`, assuming
/// `y = L - c x^(-p)` on the last third of the data.
pub fn extrapolate(xs: &[f64], ys: &[f64]) -> LimitFit {
    assert_eq!(xs.len(), ys.len(), "positions and values differ in length");
    let n = ys.len();
    if n == 0 {
        return LimitFit { limit: f64::NAN, error: f64::INFINITY, residual: 0.0, method: FitMethod::Fallback, unreliable: true };
    }
    let start = n - (n / 3).max(3).min(n);
    let (tx, ty) = (&xs[start..], &ys[start..]);
    let last = ty[ty.len() - 1];
    let lo = ty.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ty.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let unreliable = ty.windows(2).any(|w| w[1] < w[0] - MONOTONE_TOL);
    if spread <= FLAT {
        return LimitFit { limit: last, error: spread, residual: 0.0, method: FitMethod::Converged, unreliable };
    }
    let fallback = LimitFit { limit: last, error: spread, residual: 0.0, method: FitMethod::Fallback, unreliable };
    if unreliable || ty.len() < 3 {
        return fallback;
    }
    // log(dy/dx) = log(c p) - (p + 1) log(x_mid)
    let mut pts = Vec::new();
    for k in 0..ty.len() - 1 {
        let dy = ty[k + 1] - ty[k];
        let dx = tx[k + 1] - tx[k];
        if dy > 0.0 && dx > 0.0 {
            pts.push((((tx[k] + tx[k + 1]) / 2.0).ln(), (dy / dx).ln()));
        }
    }
    if pts.len() < 2 {
        return fallback;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return fallback;
    }
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    let icpt = my - slope * mx;
    let residual = (pts.iter().map(|(x, y)| (y - icpt - slope * x).powi(2)).sum::<f64>() / m).sqrt();
    let p = -slope - 1.0;
    if p <= 0.0 || residual > MAX_RESIDUAL {
        return LimitFit { residual, ..fallback };
    }
    let cp = icpt.exp();
    let c = cp / p;
    let xl = tx[tx.len() - 1];
    let gain = c * xl.powf(-p);
    LimitFit { limit: last + gain, error: gain.abs() * (0.1 + residual), residual, method: FitMethod::PowerLaw, unreliable }
}
