use rayon::prelude::*;
use serde::Serialize;

use super::closed::{Case, MIN_THETA};
use crate::config::RunConfig;
use crate::error::{ProjError, Result};

const GOLDEN_STEPS: usize = 80;
const PATTERN_MIN_STEP: f64 = 1e-13;
/// Resolutions used to locate the minimizing `delta` before the full-resolution solve.
const DELTA_SCAN_OUTER: usize = 48;
const DELTA_SCAN_INNER: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Points on the constraint curve for each `(x, y)`.
    pub inner_grid: usize,
    /// Points per axis of the outer `(x, y)` grid.
    pub outer_grid: usize,
    /// Points per axis of the `delta` box (case II).
    pub delta_grid: usize,
    /// Largest acceptable gap estimate and closed-form disagreement.
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { inner_grid: 2048, outer_grid: 512, delta_grid: 5, tol: 1e-4 }
    }
}

impl From<&RunConfig> for OracleConfig {
    fn from(c: &RunConfig) -> Self {
        OracleConfig {
            inner_grid: c.inner_grid,
            outer_grid: c.outer_grid,
            delta_grid: c.delta_grid,
            ..Default::default()
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if self.inner_grid < 16 || self.outer_grid < 3 || self.delta_grid < 1 {
            return Err(ProjError::Param(format!(
                "oracle resolution too small: inner {}, outer {}, delta {}",
                self.inner_grid, self.outer_grid, self.delta_grid
            )));
        }
        Ok(())
    }
}

/// Minimizer of `d1 s^2 + 2 y s t + d2 t^2` on `s^2 + 2 x s t + t^2 = 1`, `s, t >= 0`, over the
/// feasible `(x, y)` (and `delta` in case II).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSolution {
    /// Minimum, clamped at 0.
    pub value: f64,
    /// Minimum before clamping (negative only outside the case-I domain).
    pub raw: f64,
    pub x: f64,
    pub y: f64,
    pub s: f64,
    pub t: f64,
    pub delta: (f64, f64),
    /// Best value on the grid before refinement.
    pub grid_value: f64,
    /// Difference to the refined minimum found from a half-resolution grid.
    pub gap_estimate: f64,
    /// Set when the gap estimate exceeds the configured tolerance.
    pub flagged: bool,
    /// Case II: the coarse `delta` scan put the minimum at `delta_j = cos^2 theta_j`.
    pub delta_at_floor: Option<bool>,
}

/// Tabulated constraint curve `(s, t) = (cos phi, sin phi) / sqrt(1 + x sin 2phi)`.
struct Curve {
    cos2: Vec<f64>,
    sin2: Vec<f64>,
    twice: Vec<f64>,
    step: f64,
}

impl Curve {
    fn new(n: usize) -> Self {
        let step = std::f64::consts::FRAC_PI_2 / (n - 1) as f64;
        let phis: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
        Curve {
            cos2: phis.iter().map(|p| p.cos().powi(2)).collect(),
            sin2: phis.iter().map(|p| p.sin().powi(2)).collect(),
            twice: phis.iter().map(|p| (2.0 * p).sin()).collect(),
            step,
        }
    }

    /// Grid minimum and its index.
    fn grid_min(&self, d1: f64, d2: f64, x: f64, y: f64) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for k in 0..self.cos2.len() {
            let v = (d1 * self.cos2[k] + y * self.twice[k] + d2 * self.sin2[k]) / (1.0 + x * self.twice[k]);
            if v < best.0 {
                best = (v, k);
            }
        }
        best
    }

    /// Grid minimum refined by golden section on the neighbouring cells.
    fn min(&self, d1: f64, d2: f64, x: f64, y: f64) -> (f64, f64) {
        let (v, k) = self.grid_min(d1, d2, x, y);
        let lo = k.saturating_sub(1) as f64 * self.step;
        let hi = ((k + 1).min(self.cos2.len() - 1)) as f64 * self.step;
        let (gv, gphi) = golden(|p| ratio(d1, d2, x, y, p), lo, hi);
        if gv < v {
            (gv, gphi)
        } else {
            (v, k as f64 * self.step)
        }
    }
}

fn ratio(d1: f64, d2: f64, x: f64, y: f64, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let tw = (2.0 * phi).sin();
    (d1 * c * c + y * tw + d2 * s * s) / (1.0 + x * tw)
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_STEPS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (fc, c)
    } else {
        (fd, d)
    }
}

/// Feasible region for fixed `delta`: `|x| <= xmax`, `y` in `[lo(x), hi(x)]`.
#[derive(Debug, Clone, Copy)]
struct Region {
    d1: f64,
    d2: f64,
    /// `|x| <= cx`.
    cx: f64,
    /// `|y| <= by` (infinite in case I).
    by: f64,
    /// `|x - y| <= w`.
    w: f64,
}

impl Region {
    fn xmax(&self) -> f64 {
        self.cx.min(self.by + self.w)
    }

    /// Maps `(x, u)` with `u` in `[-1, 1]` to `(x, y)`.
    fn point(&self, x: f64, u: f64) -> (f64, f64) {
        let lo = (-self.by).max(x - self.w);
        let hi = self.by.min(x + self.w);
        let hi = hi.max(lo);
        (x, lo + (u + 1.0) / 2.0 * (hi - lo))
    }
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    grid_value: f64,
    x: f64,
    y: f64,
    phi: f64,
}

fn lin(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        lo
    } else if i == n - 1 {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Dense grid over the region followed by a pattern search in `(x, u)`.
fn solve_region(reg: &Region, curve: &Curve, outer: usize, refine: bool) -> Best {
    let xm = reg.xmax();
    let (gv, gi, gj) = (0..outer)
        .into_par_iter()
        .map(|i| {
            let x = lin(-xm, xm, outer, i);
            let mut best = (f64::INFINITY, i, 0);
            for j in 0..outer {
                let (x, y) = reg.point(x, lin(-1.0, 1.0, outer, j));
                let v = curve.grid_min(reg.d1, reg.d2, x, y).0;
                if v < best.0 {
                    best = (v, i, j);
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, usize::MAX, usize::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a });
    let eval = |x: f64, u: f64| {
        let (x, y) = reg.point(x, u);
        let (v, phi) = curve.min(reg.d1, reg.d2, x, y);
        (v, x, y, phi)
    };
    let mut x = lin(-xm, xm, outer, gi);
    let mut u = lin(-1.0, 1.0, outer, gj);
    let mut cur = eval(x, u);
    if refine {
        let mut hx = 2.0 * xm / (outer - 1) as f64;
        let mut hu = 2.0 / (outer - 1) as f64;
        while hx.max(hu) > PATTERN_MIN_STEP {
            let mut moved = false;
            for (dx, du) in [(hx, 0.0), (-hx, 0.0), (0.0, hu), (0.0, -hu), (hx, hu), (-hx, -hu), (hx, -hu), (-hx, hu)] {
                let (nx, nu) = ((x + dx).clamp(-xm, xm), (u + du).clamp(-1.0, 1.0));
                let cand = eval(nx, nu);
                if cand.0 < cur.0 {
                    cur = cand;
                    x = nx;
                    u = nu;
                    moved = true;
                    break;
                }
            }
            if !moved {
                hx /= 2.0;
                hu /= 2.0;
            }
        }
    }
    Best { value: cur.0, grid_value: gv, x: cur.1, y: cur.2, phi: cur.3 }
}

fn check(theta: f64, t1: f64, t2: f64) -> Result<()> {
    let half = std::f64::consts::FRAC_PI_2;
    if !(theta >= MIN_THETA && theta <= half + 1e-15) || !(0.0..half).contains(&t1) || !(0.0..half).contains(&t2) {
        return Err(ProjError::Domain(format!("angles ({theta}, {t1}, {t2}) out of range")));
    }
    Ok(())
}

/// Full-resolution solve plus the half-resolution value used for the gap estimate.
fn solve_checked(reg: &Region, cfg: &OracleConfig) -> (Best, f64) {
    let full = solve_region(reg, &Curve::new(cfg.inner_grid), cfg.outer_grid, true);
    let half = solve_region(reg, &Curve::new((cfg.inner_grid / 2).max(16)), (cfg.outer_grid / 2).max(3), true);
    (full, (full.value - half.value).abs())
}

fn finish(best: Best, gap_estimate: f64, delta: (f64, f64), tol: f64, delta_at_floor: Option<bool>) -> OracleSolution {
    let den = (1.0 + best.x * (2.0 * best.phi).sin()).sqrt();
    OracleSolution {
        value: best.value.max(0.0),
        raw: best.value,
        x: best.x,
        y: best.y,
        s: best.phi.cos() / den,
        t: best.phi.sin() / den,
        delta,
        grid_value: best.grid_value,
        gap_estimate,
        flagged: gap_estimate > tol,
        delta_at_floor,
    }
}

/// Case I: `delta_j = cos^2 theta_j`, `|x| <= cos theta`, `|x - y| <= sin theta_1 sin theta_2`.
pub fn oracle_min_i(theta: f64, t1: f64, t2: f64, cfg: &OracleConfig) -> Result<OracleSolution> {
    check(theta, t1, t2)?;
    cfg.validate()?;
    let reg = Region {
        d1: t1.cos().powi(2),
        d2: t2.cos().powi(2),
        cx: theta.cos(),
        by: f64::INFINITY,
        w: t1.sin() * t2.sin(),
    };
    let (best, gap) = solve_checked(&reg, cfg);
    Ok(finish(best, gap, (reg.d1, reg.d2), cfg.tol, None))
}

fn region_ii(theta: f64, d1: f64, d2: f64) -> Region {
    Region { d1, d2, cx: theta.cos(), by: (d1 * d2).sqrt() * theta.cos(), w: ((1.0 - d1) * (1.0 - d2)).max(0.0).sqrt() }
}

/// Case II: additionally `delta_j` in `[cos^2 theta_j, 1]`, `|y| <= sqrt(delta_1 delta_2) cos theta`
/// and `|x - y| <= sqrt((1 - delta_1)(1 - delta_2))`.
pub fn oracle_min_ii(theta: f64, t1: f64, t2: f64, cfg: &OracleConfig) -> Result<OracleSolution> {
    check(theta, t1, t2)?;
    cfg.validate()?;
    let (f1, f2) = (t1.cos().powi(2), t2.cos().powi(2));
    let coarse = Curve::new(DELTA_SCAN_INNER.min(cfg.inner_grid));
    let nd = cfg.delta_grid;
    let mut scan = (f64::INFINITY, 0, 0);
    for i in 0..nd {
        for j in 0..nd {
            let reg = region_ii(theta, lin(f1, 1.0, nd, i), lin(f2, 1.0, nd, j));
            let v = solve_region(&reg, &coarse, DELTA_SCAN_OUTER.min(cfg.outer_grid), false).grid_value;
            if v < scan.0 - 1e-12 {
                scan = (v, i, j);
            }
        }
    }
    let at_floor = scan.1 == 0 && scan.2 == 0;
    let (mut best, mut gap) = solve_checked(&region_ii(theta, f1, f2), cfg);
    let mut delta = (f1, f2);
    if !at_floor {
        let d = (lin(f1, 1.0, nd, scan.1), lin(f2, 1.0, nd, scan.2));
        let (other, other_gap) = solve_checked(&region_ii(theta, d.0, d.1), cfg);
        if other.value < best.value {
            best = other;
            gap = other_gap;
            delta = d;
        }
    }
    Ok(finish(best, gap, delta, cfg.tol, Some(at_floor)))
}

pub fn oracle_min(case: Case, theta: f64, t1: f64, t2: f64, cfg: &OracleConfig) -> Result<OracleSolution> {
    match case {
        Case::I => oracle_min_i(theta, t1, t2, cfg),
        Case::II => oracle_min_ii(theta, t1, t2, cfg),
    }
}
