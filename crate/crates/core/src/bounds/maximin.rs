use serde::Serialize;

use crate::error::{ProjError, Result};
use crate::linalg::C64;

const SCAN: usize = 4096;
const GOLDEN_STEPS: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaximinBranch {
    /// `w = e_1`.
    Axis,
    /// `w` in the span of `e_1` and `u`, balancing both terms.
    Balanced,
}

/// `sup { min(|(u, w)|, 2^-1/2 |(e_1, w)|) : |w| = 1 }` by search and by the recipe, with the
/// resulting distance of `p(u)` to the closed relatively compact projections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximinResult {
    /// `|(u, e_1)|`.
    pub overlap: f64,
    pub numeric: f64,
    pub recipe: f64,
    pub branch: MaximinBranch,
    /// `arccos` of the supremum.
    pub d_a: f64,
    /// `sin d_a`.
    pub dist: f64,
}

/// Value of the recipe for `c = |(u, e_1)|`.
pub fn maximin_recipe(c: f64) -> (f64, MaximinBranch) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    if c >= r {
        return (r, MaximinBranch::Axis);
    }
    let s = 1.0;
    let t = s * (r - c) / (1.0 - c * r);
    let norm = (s * s + t * t + 2.0 * s * t * c).sqrt();
    let along_u = (s * c + t) / norm;
    let along_e1 = r * (s + t * c) / norm;
    (along_u.min(along_e1), MaximinBranch::Balanced)
}

/// Search over unit `w = cos(psi) e_1 + sin(psi) f` with `f` the unit part of `u` orthogonal
/// to `e_1`; phases do not raise either term.
pub fn maximin_numeric(c: f64) -> f64 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let sn = (1.0 - c * c).max(0.0).sqrt();
    let g = |psi: f64| {
        let (s, co) = psi.sin_cos();
        (c * co + sn * s).abs().min(r * co.abs())
    };
    let step = std::f64::consts::PI / SCAN as f64;
    let mut best = (f64::NEG_INFINITY, 0usize);
    for k in 0..=SCAN {
        let v = g(k as f64 * step);
        if v > best.0 {
            best = (v, k);
        }
    }
    let (mut a, mut b) = ((best.1 as f64 - 1.0) * step, (best.1 as f64 + 1.0) * step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = g(x2);
        }
    }
    best.0.max(f1).max(f2)
}

/// Distance data for `p(u)`, the rank-one projection of the unit vector `u`; `e_1` is the
/// first coordinate.
pub fn maximin_cap_distance(u: &[C64]) -> Result<MaximinResult> {
    if u.is_empty() {
        return Err(ProjError::Dimension("empty vector".into()));
    }
    let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(ProjError::Param(format!("u must be a unit vector, norm is {norm}")));
    }
    let overlap = u[0].norm().min(1.0);
    let (recipe, branch) = maximin_recipe(overlap);
    let numeric = maximin_numeric(overlap);
    let d_a = recipe.clamp(-1.0, 1.0).acos();
    Ok(MaximinResult { overlap, numeric, recipe, branch, d_a, dist: d_a.sin() })
}
