//! Seeded property suites for the matrix lemmas and the pair geometry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::bounds::maximin_cap_distance;
use crate::error::{ProjError, Result};
use crate::linalg::{
    c, hermitian_eigen, op_norm, range_basis, spectral_projection, CMat, FinProjection, HermitianMatrix, Interval, C64,
};
use crate::nearest::{compression_inverse_check, LemmaOutcome};
use crate::pairgeom::{d_a, pair_norm_distance};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub skipped: usize,
    pub max_violation: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    fn new(name: &str, tolerance: f64) -> Self {
        SuiteResult { name: name.into(), trials: 0, failures: 0, skipped: 0, max_violation: 0.0, tolerance }
    }

    /// Records a trial whose violation is `v` (non-positive means it held).
    fn record(&mut self, v: f64) {
        self.record_as(v, v > self.tolerance);
    }

    fn record_as(&mut self, v: f64, failed: bool) {
        self.trials += 1;
        self.max_violation = self.max_violation.max(v);
        self.failures += usize::from(failed);
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

fn gaussian_mat(rng: &mut ChaCha8Rng, r: usize, k: usize) -> CMat {
    CMat::from_fn(r, k, |_, _| gaussian(rng))
}

/// Haar-distributed projection of the given rank.
fn random_projection(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> FinProjection {
    FinProjection::from_orthonormal(&range_basis(&gaussian_mat(rng, n, rank), 1e-10))
}

/// Positive matrix with norm 1.
fn random_contraction(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = gaussian_mat(rng, n, n);
    let h = &g * g.adjoint();
    let s = op_norm(&h);
    h / c(s)
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = gaussian_mat(rng, n, n);
    (&g + g.adjoint()) * c(0.5)
}

pub fn lemma_2_5_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("compression inverse inequality", 0.0);
    for _ in 0..trials {
        let n = rng.random_range(2..=6);
        let rank = rng.random_range(1..n);
        let p = random_projection(&mut rng, n, rank);
        let floor = rng.random_range(0.05..0.5);
        let a = CMat::identity(n, n) * c(floor) + random_contraction(&mut rng, n) * c(1.0 - floor);
        match compression_inverse_check(&p, &HermitianMatrix::from_upper(&a))? {
            LemmaOutcome::Pass { margin } => out.record_as(-margin, false),
            LemmaOutcome::Fail { margin } => out.record_as(-margin, true),
            LemmaOutcome::Skipped { .. } => out.skipped += 1,
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma37Result {
    pub x: f64,
    pub y: f64,
    pub u1_sq: f64,
    pub u2_sq: f64,
    /// Smallest eigenvalue of `diag(x, y) - u u*`.
    pub min_eig: f64,
    pub pass: bool,
}

/// The extremal unit vector under `diag(x, y)` for `x > 1 > y > 0`: `u u* <= diag(x, y)`
/// with a zero eigenvalue left over.
pub fn lemma_3_7_check(x: f64, y: f64) -> Result<Lemma37Result> {
    if !(x > 1.0 && y > 0.0 && y < 1.0) {
        return Err(ProjError::Domain(format!("need x > 1 > y > 0, got x = {x}, y = {y}")));
    }
    let u1_sq = x * (1.0 - y) / (x - y);
    let u2_sq = y * (x - 1.0) / (x - y);
    let min_eig = majorant_gap(x, y, u1_sq.sqrt(), C64::new(u2_sq.sqrt(), 0.0))?;
    let pass = (u1_sq + u2_sq - 1.0).abs() <= 1e-12 && min_eig >= -1e-10 && min_eig.abs() <= 1e-10;
    Ok(Lemma37Result { x, y, u1_sq, u2_sq, min_eig, pass })
}

fn majorant_gap(x: f64, y: f64, u1: f64, u2: C64) -> Result<f64> {
    let u = CMat::from_column_slice(2, 1, &[c(u1), u2]);
    let mut k = CMat::zeros(2, 2);
    k[(0, 0)] = c(x);
    k[(1, 1)] = c(y);
    Ok(hermitian_eigen(&HermitianMatrix::from_upper(&(k - &u * u.adjoint())))?.min())
}

/// Extremal vectors (tight) and interior vectors (majorized) for random `x > 1 > y > 0`.
pub fn lemma_3_7_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("majorant of escaping unit vectors", 1e-10);
    for _ in 0..trials {
        let x = rng.random_range(1.01..10.0);
        let y = rng.random_range(0.01..0.99);
        let tight = lemma_3_7_check(x, y)?;
        let b2 = rng.random::<f64>() * tight.u2_sq;
        let u2 = C64::from_polar(b2.sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        let interior = -majorant_gap(x, y, (1.0 - b2).sqrt(), u2)?;
        out.record(tight.min_eig.abs().max(interior));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma412Result {
    pub t: f64,
    pub dim: usize,
    pub trials: usize,
    pub failures: usize,
    pub max_residual: f64,
}

/// Writes `u` with `|u| <= 1`, `|Q u| <= t` (`Q` dropping the first coordinate) as a
/// convex combination of two unit vectors with `|Q x| <= t`. Returns the worst of the
/// reconstruction residual and the constraint violations.
pub fn lemma_4_12_check(t: f64, u: &[C64]) -> Result<f64> {
    if u.len() < 2 || !(t > 0.0 && t <= 1.0) {
        return Err(ProjError::Domain(format!("need dim >= 2 and 0 < t <= 1, got dim {} and t = {t}", u.len())));
    }
    let w_norm = u[1..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let total = (u[0].norm_sqr() + w_norm * w_norm).sqrt();
    if total > 1.0 + 1e-12 || w_norm > t + 1e-12 {
        return Err(ProjError::Domain(format!("u outside the set: |u| = {total}, |Qu| = {w_norm}")));
    }
    let a = u[0];
    let rem = (1.0 - w_norm * w_norm).max(0.0).sqrt();
    let dir = if a.norm() > 1e-300 { a / a.norm() } else { C64::new(1.0, 0.0) };
    let lam = dir * rem;
    let mu = if rem > 0.0 { 0.5 * (1.0 + a.norm() / rem) } else { 1.0 };
    let mut x = u.to_vec();
    let mut y = u.to_vec();
    x[0] = lam;
    y[0] = -lam;
    let mut worst: f64 = 0.0;
    for v in [&x, &y] {
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max((n - 1.0).abs());
    }
    worst = worst.max(w_norm - t).max(-mu).max(mu - 1.0);
    let res = (0..u.len()).map(|i| (x[i] * mu + y[i] * (1.0 - mu) - u[i]).norm_sqr()).sum::<f64>().sqrt();
    Ok(worst.max(res))
}

pub fn lemma_4_12_suite(t: f64, dim: usize, trials: usize, seed: u64) -> Result<Lemma412Result> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut max_residual: f64 = 0.0;
    for _ in 0..trials {
        let g: Vec<C64> = (1..dim).map(|_| gaussian(&mut rng)).collect();
        let gn = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let w_norm = t * rng.random::<f64>();
        let mut u = vec![C64::from_polar(
            (1.0 - w_norm * w_norm).sqrt() * rng.random::<f64>(),
            rng.random_range(0.0..std::f64::consts::TAU),
        )];
        u.extend(g.iter().map(|z| z * (w_norm / gn)));
        let r = lemma_4_12_check(t, &u)?;
        max_residual = max_residual.max(r);
        if r > 1e-10 {
            failures += 1;
        }
    }
    Ok(Lemma412Result { t, dim, trials, failures, max_residual })
}

/// For `h = a - b` with `b >= 0` and `p` the spectral projection of `h` on `[eps, inf)`:
/// `pap >= eps p`, and when `h >= 0` also `p <= a / eps`.
pub fn spectral_inequality_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("spectral projection inequalities", 1e-9);
    for _ in 0..trials {
        let n = rng.random_range(2..=6);
        let positive = rng.random::<bool>();
        let (a, h) = if positive {
            let h = random_contraction(&mut rng, n) * c(rng.random_range(0.5..3.0));
            (&h + random_contraction(&mut rng, n) * c(rng.random::<f64>()), h)
        } else {
            let a = random_hermitian(&mut rng, n);
            let h = &a - random_contraction(&mut rng, n) * c(rng.random::<f64>());
            (a, h)
        };
        let hh = HermitianMatrix::from_upper(&h);
        let ev = hermitian_eigen(&hh)?.values;
        let pos: Vec<usize> = (0..ev.len()).filter(|&i| ev[i] > 1e-3).collect();
        if pos.is_empty() {
            out.skipped += 1;
            continue;
        }
        let k = pos[rng.random_range(0..pos.len())];
        let below = ev.iter().copied().filter(|&v| v < ev[k] - 1e-9).fold(0.0, f64::max);
        let eps = 0.5 * (below + ev[k]);
        let p = spectral_projection(&hh, Interval::at_least(eps))?;
        let b = p.basis();
        let ah = HermitianMatrix::from_upper(&a);
        let floor = hermitian_eigen(&ah.compress(&b))?.min();
        let scale = op_norm(&a).max(1.0);
        out.record((eps - floor) / scale);
        if positive {
            let gap = hermitian_eigen(&ah.scaled(1.0 / eps).sub(p.as_hermitian()))?.min();
            out.record(-gap / scale);
        }
    }
    Ok(out)
}

/// `|p - q|` from the pair decomposition against the direct operator norm.
pub fn pair_distance_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("pair decomposition distance", 1e-9);
    for _ in 0..trials {
        let n = rng.random_range(1..=10);
        let (rp, rq) = (rng.random_range(0..=n), rng.random_range(0..=n));
        let p = random_projection(&mut rng, n, rp);
        let q = random_projection(&mut rng, n, rq);
        let direct = op_norm(&(p.as_mat() - q.as_mat()));
        out.record((pair_norm_distance(&p, &q)? - direct).abs());
    }
    Ok(out)
}

/// Triangle inequality for `d_a = arcsin |p - q|`, with ranks drawn so that near and far
/// pairs both occur.
pub fn d_a_triangle_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("d_a triangle inequality", 1e-9);
    for _ in 0..trials {
        let n = rng.random_range(1..=10);
        let rank = rng.random_range(0..=n);
        let p = random_projection(&mut rng, n, rank);
        let near = |rng: &mut ChaCha8Rng, base: &FinProjection| -> FinProjection {
            if rng.random::<bool>() {
                let b = base.basis();
                let k = range_basis(&(&b + gaussian_mat(rng, n, b.ncols()) * c(0.3)), 1e-10);
                FinProjection::from_orthonormal(&k)
            } else {
                let r = rng.random_range(0..=n);
                random_projection(rng, n, r)
            }
        };
        let q = near(&mut rng, &p);
        let r = near(&mut rng, &q);
        out.record(d_a(&p, &r)? - d_a(&p, &q)? - d_a(&q, &r)?);
    }
    Ok(out)
}

/// Smallest `mu` with `l1 e11 - l2 P_+ + mu P_-` positive, where `P_+-` project on
/// `(e1 +- e2)/sqrt 2`; found by bisection on the smallest eigenvalue.
pub fn minimal_lambda3(l1: f64, l2: f64) -> Result<f64> {
    if !(l2 > 0.0 && l1 > 2.0 * l2) {
        return Err(ProjError::Domain(format!("need l1 > 2 l2 > 0, got l1 = {l1}, l2 = {l2}")));
    }
    let min_eig = |mu: f64| {
        let (a, b, d) = (l1 - 0.5 * l2 + 0.5 * mu, -0.5 * l2 - 0.5 * mu, -0.5 * l2 + 0.5 * mu);
        let tr = 0.5 * (a + d);
        tr - (tr * tr - (a * d - b * b)).max(0.0).sqrt()
    };
    let mut hi = 1.0;
    while min_eig(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(ProjError::Domain("no positive completion found".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if min_eig(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximinSuite {
    pub samples: usize,
    pub max_diff: f64,
    /// Distance for `u` orthogonal to `e_1`.
    pub boundary_zero: f64,
    /// Distance for `u` with overlap at least `2^-1/2`.
    pub boundary_axis: f64,
    pub pass: bool,
}

pub fn maximin_suite(samples: usize, seed: u64) -> Result<MaximinSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_diff: f64 = 0.0;
    for _ in 0..samples {
        let dim = rng.random_range(2..=6);
        let g: Vec<C64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
        let n = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let u: Vec<C64> = g.iter().map(|z| z / n).collect();
        let r = maximin_cap_distance(&u)?;
        max_diff = max_diff.max((r.numeric - r.recipe).abs());
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let boundary_zero = maximin_cap_distance(&[c(0.0), c(1.0), c(0.0)])?.dist;
    // the value farthest from 2^-1/2 over overlaps at and above the threshold
    let mut boundary_axis = h;
    for u in [vec![c(1.0), c(0.0)], vec![c(h), c(h)], vec![c(0.9), c((1.0f64 - 0.81).sqrt())]] {
        let d = maximin_cap_distance(&u)?.dist;
        if (d - h).abs() > (boundary_axis - h).abs() {
            boundary_axis = d;
        }
    }
    let pass = max_diff <= 1e-8
        && (boundary_zero - (2.0f64 / 3.0).sqrt()).abs() <= 1e-10
        && (boundary_axis - h).abs() <= 1e-10;
    Ok(MaximinSuite { samples, max_diff, boundary_zero, boundary_axis, pass })
}
