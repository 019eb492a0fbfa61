//! Sampled regularity constants: `sup |a pbar| / |a p|` and the kernel and cone conditions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::alpha::fiber_blocks;
use super::element::{SeqElement, Slot};
use super::model::SeqModel;
use super::projection::SeqProjection;
use crate::error::{ProjError, Result};
use crate::linalg::{c, hermitian_eigen, restricted_norm, CMat, HermitianMatrix, C64};
use crate::report::inf_f64;

#[derive(Debug, Clone, Serialize)]
pub struct SamplerConfig {
    pub samples: usize,
    pub climb_steps: usize,
    /// Extra coordinates beyond the support of `p` included in random elements.
    pub pad: usize,
    /// Cap on random-element support per component.
    pub max_block: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { samples: 2000, climb_steps: 200, pad: 2, max_block: 8 }
    }
}

/// `|a p|` as a sup over fibers.
pub fn times_projection_norm(model: &SeqModel, a: &SeqElement, p: &SeqProjection) -> f64 {
    fiber_blocks(model, p, a).iter().map(|(_, b, act)| restricted_norm(act, b)).fold(0.0, f64::max)
}

/// Core coordinates where `p` or its closure has weight in the limit or tail, padded.
pub fn active_coords(model: &SeqModel, p: &SeqProjection, pbar: &SeqProjection, cfg: &SamplerConfig) -> Vec<usize> {
    let d = model.fiber_dim;
    let mut used = vec![false; d];
    let mut mark_fiber = |b: &CMat| {
        for comp in 0..model.comps {
            for i in 0..d {
                if (0..b.ncols()).any(|k| b[(model.fiber_index(comp, i), k)].norm() > 1e-12) {
                    used[i] = true;
                }
            }
        }
    };
    mark_fiber(&p.limit);
    mark_fiber(&pbar.limit);
    for t in &p.tail {
        mark_fiber(&model.weak_limit(&t.basis));
    }
    let top = used.iter().rposition(|&u| u).map(|i| i + 1).unwrap_or(0);
    let width = (top + cfg.pad).min(d).min(cfg.max_block.max(1)).max(1);
    let mut coords = Vec::new();
    for comp in 0..model.comps {
        for i in 0..width {
            coords.push(comp * d + i);
        }
    }
    coords
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

fn random_block(rng: &mut ChaCha8Rng, model: &SeqModel, coords: &[usize], hermitian: bool) -> CMat {
    let n = model.core_dim();
    let mut x = CMat::zeros(n, n);
    for &i in coords {
        for &j in coords {
            x[(i, j)] = C64::new(gaussian(rng), gaussian(rng));
        }
    }
    if hermitian {
        (&x + x.adjoint()) * c(0.5)
    } else {
        x
    }
}

fn random_element(rng: &mut ChaCha8Rng, model: &SeqModel, coords: &[usize]) -> SeqElement {
    let mut a = SeqElement::zero(model);
    a.limit = random_block(rng, model, coords, false);
    let masked = rng.random_bool(0.5);
    for s in a.fibers.iter_mut() {
        *s = if !masked || rng.random_bool(0.5) { Slot::Limit } else { Slot::Zero };
    }
    a
}

fn ratio(model: &SeqModel, a: &SeqElement, p: &SeqProjection, pbar: &SeqProjection) -> f64 {
    let top = times_projection_norm(model, a, pbar);
    let bottom = times_projection_norm(model, a, p);
    if bottom <= 1e-14 {
        if top > 1e-10 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        top / bottom
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    #[serde(with = "inf_f64")]
    pub constant: f64,
    pub best_source: String,
    pub samples: usize,
    pub witness_ratios: Vec<(String, f64)>,
}

/// Largest ratio `|a pbar| / |a p|` over named witnesses, random eventually constant
/// elements and a local climb from the best random sample. A lower bound on the true
/// quasi-regularity constant.
pub fn quasi_regularity_constant(
    model: &SeqModel,
    p: &SeqProjection,
    cfg: &SamplerConfig,
    witnesses: &[(String, SeqElement)],
    rng: &mut ChaCha8Rng,
) -> Result<RegularityReport> {
    let pbar = p.closure(model)?;
    let mut best = (1.0, "closed bound".to_string());
    let mut witness_ratios = Vec::new();
    for (name, a) in witnesses {
        a.validate(model)?;
        let r = ratio(model, a, p, &pbar);
        witness_ratios.push((name.clone(), r));
        if r > best.0 {
            best = (r, name.clone());
        }
    }
    let coords = active_coords(model, p, &pbar, cfg);
    let mut best_random: Option<(f64, SeqElement)> = None;
    for _ in 0..cfg.samples {
        let a = random_element(rng, model, &coords);
        let r = ratio(model, &a, p, &pbar);
        if best_random.as_ref().map(|(v, _)| r > *v).unwrap_or(true) {
            best_random = Some((r, a));
        }
    }
    if let Some((mut val, mut a)) = best_random {
        let mut step = 0.3;
        for _ in 0..cfg.climb_steps {
            if !val.is_finite() {
                break;
            }
            let scale = a.limit.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12);
            let mut cand = a.clone();
            cand.limit += random_block(rng, model, &coords, false) * c(step * scale);
            let r = ratio(model, &cand, p, &pbar);
            if r > val {
                val = r;
                a = cand;
            } else {
                step *= 0.97;
            }
        }
        if val > best.0 {
            best = (val, "random".into());
        }
    }
    Ok(RegularityReport { constant: best.0, best_source: best.1, samples: cfg.samples, witness_ratios })
}

/// Quasi-regularity constant of `diag(p, ..., p)` in the `k`-fold amplified model.
/// Witnesses must be elements of the amplified model.
pub fn k_regular_constant(
    model: &SeqModel,
    p: &SeqProjection,
    k: usize,
    cfg: &SamplerConfig,
    witnesses: &[(String, SeqElement)],
    rng: &mut ChaCha8Rng,
) -> Result<RegularityReport> {
    let (big, pk) = p.amplify(model, k)?;
    quasi_regularity_constant(&big, &pk, cfg, witnesses, rng)
}

/// `diag(x, ..., x)` for an element core of the base model.
pub fn amplify_core(x: &CMat, k: usize) -> CMat {
    let n = x.nrows();
    let mut out = CMat::zeros(n * k, n * k);
    for j in 0..k {
        out.view_mut((j * n, j * n), (n, n)).copy_from(x);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum RegularityCheck {
    Pass { tested: usize },
    Counterexample { source: String, premise: f64, conclusion: f64 },
}

impl RegularityCheck {
    pub fn passed(&self) -> bool {
        matches!(self, RegularityCheck::Pass { .. })
    }
}

/// Orthonormal basis (by real coordinates) of hermitian matrices supported on `coords`.
fn hermitian_basis(model: &SeqModel, coords: &[usize]) -> Vec<CMat> {
    let n = model.core_dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for (x, &i) in coords.iter().enumerate() {
        let mut m = CMat::zeros(n, n);
        m[(i, i)] = c(1.0);
        out.push(m);
        for &j in &coords[x + 1..] {
            let mut re = CMat::zeros(n, n);
            re[(i, j)] = c(s);
            re[(j, i)] = c(s);
            out.push(re);
            let mut im = CMat::zeros(n, n);
            im[(i, j)] = C64::new(0.0, s);
            im[(j, i)] = C64::new(0.0, -s);
            out.push(im);
        }
    }
    out
}

fn max_compression(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> f64 {
    fiber_blocks(model, p, a)
        .iter()
        .map(|(_, b, act)| {
            let m = b.adjoint() * act * b;
            m.iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn max_eig_compression(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for (_, b, act) in fiber_blocks(model, p, a) {
        best = best.max(hermitian_eigen(&HermitianMatrix::from_upper(&act).compress(&b))?.max());
    }
    Ok(best)
}

const PREMISE_TOL: f64 = 1e-9;
const CONCLUSION_TOL: f64 = 1e-7;

/// Searches for self-adjoint `a` with `pap = 0` but `pbar a pbar != 0`, among the given
/// witnesses and random constant elements drawn from the kernel of `a -> pap`.
pub fn zero_regular_check(
    model: &SeqModel,
    p: &SeqProjection,
    cfg: &SamplerConfig,
    witnesses: &[(String, SeqElement)],
    rng: &mut ChaCha8Rng,
) -> Result<RegularityCheck> {
    let pbar = p.closure(model)?;
    let mut tested = 0;
    for (name, a) in witnesses {
        let premise = max_compression(model, p, a);
        if premise > PREMISE_TOL {
            continue;
        }
        tested += 1;
        let conclusion = max_compression(model, &pbar, a);
        if conclusion > CONCLUSION_TOL {
            return Ok(RegularityCheck::Counterexample { source: name.clone(), premise, conclusion });
        }
    }
    let coords = active_coords(model, p, &pbar, cfg);
    let basis = hermitian_basis(model, &coords);
    let images: Vec<Vec<f64>> = basis
        .iter()
        .map(|h| {
            let a = SeqElement::constant(model, h.clone()).expect("core-sized");
            fiber_blocks(model, p, &a)
                .iter()
                .flat_map(|(_, b, act)| (b.adjoint() * act * b).iter().flat_map(|z| [z.re, z.im]).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    let k = basis.len();
    let gram = CMat::from_fn(k, k, |i, j| c(images[i].iter().zip(&images[j]).map(|(x, y)| x * y).sum()));
    let e = hermitian_eigen(&HermitianMatrix::from_upper(&gram))?;
    let scale = e.max().max(1.0);
    let null: Vec<usize> = (0..k).filter(|&j| e.values[j] <= 1e-12 * scale).collect();
    if null.is_empty() {
        return Ok(RegularityCheck::Pass { tested });
    }
    for _ in 0..cfg.samples {
        let mut h = CMat::zeros(model.core_dim(), model.core_dim());
        for &j in &null {
            let w = gaussian(rng);
            for (bi, b) in basis.iter().enumerate() {
                let coef = e.vectors[(bi, j)].re * w;
                if coef != 0.0 {
                    h += b * c(coef);
                }
            }
        }
        let a = SeqElement::constant(model, h)?;
        let premise = max_compression(model, p, &a);
        if premise > PREMISE_TOL * model.element_norm(&a).max(1.0) {
            continue;
        }
        tested += 1;
        let conclusion = max_compression(model, &pbar, &a);
        if conclusion > CONCLUSION_TOL * model.element_norm(&a).max(1.0) {
            return Ok(RegularityCheck::Counterexample { source: "kernel sample".into(), premise, conclusion });
        }
    }
    Ok(RegularityCheck::Pass { tested })
}

/// Searches for self-adjoint `a` with `pap <= 0` but `pbar a pbar` not `<= 0`. Random
/// hermitian elements are shifted down by the smallest multiple of the identity on their
/// support that makes the premise hold.
pub fn cone_regular_check(
    model: &SeqModel,
    p: &SeqProjection,
    cfg: &SamplerConfig,
    witnesses: &[(String, SeqElement)],
    rng: &mut ChaCha8Rng,
) -> Result<RegularityCheck> {
    let pbar = p.closure(model)?;
    let mut tested = 0;
    for (name, a) in witnesses {
        let premise = max_eig_compression(model, p, a)?;
        if premise > PREMISE_TOL {
            continue;
        }
        tested += 1;
        let conclusion = max_eig_compression(model, &pbar, a)?;
        if conclusion > CONCLUSION_TOL {
            return Ok(RegularityCheck::Counterexample { source: name.clone(), premise, conclusion });
        }
    }
    let coords = active_coords(model, p, &pbar, cfg);
    let mut ident = CMat::zeros(model.core_dim(), model.core_dim());
    for &i in &coords {
        ident[(i, i)] = c(1.0);
    }
    let probe = SeqElement::constant(model, ident.clone())?;
    let blocks: Vec<(CMat, CMat)> = fiber_blocks(model, p, &probe).into_iter().map(|(_, b, act)| (b, act)).collect();
    for _ in 0..cfg.samples {
        let h = random_block(rng, model, &coords, true);
        let a = SeqElement::constant(model, h.clone())?;
        let bound = model.element_norm(&a) + 1.0;
        // compressions of the sample and of the identity on its support, fiber by fiber
        let pairs: Vec<(CMat, CMat)> = fiber_blocks(model, p, &a)
            .iter()
            .zip(&blocks)
            .map(|((_, b, act), (_, id_act))| (b.adjoint() * act * b, b.adjoint() * id_act * b))
            .collect();
        let g = |mu: f64| -> Result<f64> {
            let mut worst = f64::NEG_INFINITY;
            for (ch, ci) in &pairs {
                worst = worst.max(hermitian_eigen(&HermitianMatrix::from_upper(&(ch - ci * c(mu))))?.max());
            }
            Ok(worst)
        };
        let (mut lo, mut hi) = (-bound, bound);
        if g(lo)? <= 0.0 {
            hi = lo;
        } else {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if g(mid)? <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        let shifted = SeqElement::constant(model, &h - &ident * c(hi))?;
        let premise = max_eig_compression(model, p, &shifted)?;
        if premise > PREMISE_TOL {
            return Err(ProjError::Domain(format!("shifted sample violates the premise by {premise:e}")));
        }
        tested += 1;
        let conclusion = max_eig_compression(model, &pbar, &shifted)?;
        if conclusion > CONCLUSION_TOL * bound {
            return Ok(RegularityCheck::Counterexample { source: "shifted sample".into(), premise, conclusion });
        }
    }
    Ok(RegularityCheck::Pass { tested })
}

/// `K^2 / (2 - K^2)`, the cone constant implied by `K`-quasi-regularity; needs `K < sqrt 2`.
pub fn quasi_regular_cone_bound(k: f64) -> Result<f64> {
    let k2 = k * k;
    if !(k >= 1.0 && k2 < 2.0) {
        return Err(ProjError::Domain(format!("K = {k} must satisfy 1 <= K < sqrt 2")));
    }
    Ok(k2 / (2.0 - k2))
}

/// `s / (s - K^2 (s - 1))`, the bound on `alpha(pbar)` for a `K`-quasi-regular `p` with
/// `alpha(p) = s`; needs `K^2 < s / (s - 1)`.
pub fn closure_alpha_bound(s: f64, k: f64) -> Result<f64> {
    if !(s >= 1.0) || !(k >= 1.0) {
        return Err(ProjError::Domain(format!("s = {s} and K = {k} must be at least 1")));
    }
    let denom = s - k * k * (s - 1.0);
    if denom <= 0.0 {
        return Err(ProjError::Domain(format!("K^2 = {} must be below s/(s-1) = {}", k * k, s / (s - 1.0))));
    }
    Ok(s / denom)
}
