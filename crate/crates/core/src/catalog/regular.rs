//! Regularity entries: sampled quasi-regularity constants and kernel and cone checks.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::build::{core_diag, first_component, gvec, model, no_limit, small_spec};
use super::examples::inner_s;
use super::report::ExampleReport;
use crate::config::RunConfig;
use crate::error::{ProjError, Result};
use crate::linalg::{c, range_basis, CMat, C64};
use crate::seqmodel::{
    alpha_sandwich, closure_alpha_bound, cone_regular_check, hcat, k_regular_constant, quasi_regularity_constant,
    zero_regular_check, ModelSpec, SamplerConfig, SeqElement, SeqModel, SeqProjection, Slot, Witness,
};

const CLAIM: &str = "claimed by the source example";

fn sampler(cfg: &RunConfig) -> SamplerConfig {
    SamplerConfig { samples: cfg.samples, ..Default::default() }
}

fn sec2(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(ProjError::Param(format!("theta = {theta} must lie in (0, pi/2)")));
    }
    Ok(1.0 / theta.cos().powi(2))
}

fn witness(name: &str, a: SeqElement) -> Vec<(String, SeqElement)> {
    vec![(name.to_string(), a)]
}

pub(crate) fn ex_4_10a(cfg: &RunConfig, theta: f64, rng: &mut ChaCha8Rng) -> Result<ExampleReport> {
    let s = sec2(theta)?;
    let m = model(cfg, small_spec(cfg))?;
    let tilted = gvec(&m, &[(0, theta.cos()), (m.escape_index(0, 0), theta.sin())]);
    let p = SeqProjection::structured(&m, vec![gvec(&m, &[(0, 1.0)]), tilted], no_limit(&m))?;
    let sc = sampler(cfg);
    let mut r = ExampleReport::new("4.10a", "4.10(a): a regular open projection with alpha = s");
    for k in 1..=3 {
        let rep = k_regular_constant(&m, &p, k, &sc, &[], rng)?;
        r.within(&format!("{k}-regular constant"), rep.constant, 1.0, 1.0 + 1e-6);
    }
    let w = Witness::Compress(SeqElement::constant(&m, core_diag(&m, &[(0, s)]))?);
    r.alpha("alpha_p", &alpha_sandwich(&m, &p, Some(&w))?, s, CLAIM);
    r.note("sampled constants are lower bounds; the check is that none exceeds 1");
    Ok(r)
}

pub(crate) fn ex_4_10b(cfg: &RunConfig, theta: f64, rng: &mut ChaCha8Rng) -> Result<ExampleReport> {
    let s = sec2(theta)?;
    let m = model(cfg, small_spec(cfg))?;
    let v = gvec(&m, &[(0, theta.cos()), (m.escape_index(0, 0), theta.sin())]);
    let q = SeqProjection::structured(&m, vec![v], no_limit(&m))?;
    let sc = sampler(cfg);
    let e11 = SeqElement::constant(&m, core_diag(&m, &[(0, 1.0)]))?;
    let rep = quasi_regularity_constant(&m, &q, &sc, &witness("e1 e1*", e11), rng)?;
    let mut r = ExampleReport::new("4.10b", "4.10(b): cone-regular and sqrt(s)-quasi-regular, not better");
    r.measure("quasi_regularity", &rep);
    r.within("quasi-regularity constant", rep.constant, s.sqrt() - 0.02, s.sqrt() + 1e-6);
    r.holds("cone-regular", cone_regular_check(&m, &q, &sc, &[], rng)?.passed());
    let w = Witness::Compress(SeqElement::constant(&m, core_diag(&m, &[(0, s)]))?);
    r.alpha("alpha_p", &alpha_sandwich(&m, &q, Some(&w))?, s, CLAIM);
    Ok(r)
}

/// Class `m` is spanned by `e_j / m + sqrt(1 - 1/m^2) l_j` for `j < m`.
pub(crate) fn ex_4_10c(cfg: &RunConfig, levels: usize, rng: &mut ChaCha8Rng) -> Result<ExampleReport> {
    let m = model(cfg, ModelSpec { escape_dim: levels, block: levels.max(4), ..small_spec(cfg) })?;
    let classes: Vec<CMat> = (1..=levels)
        .map(|lv| {
            let x = 1.0 / lv as f64;
            let cols: Vec<CMat> =
                (0..lv).map(|j| gvec(&m, &[(j, x), (m.escape_index(0, j), (1.0 - x * x).sqrt())])).collect();
            hcat(&cols)
        })
        .collect();
    let p = SeqProjection::structured(&m, classes, no_limit(&m))?.with_total(&first_component(&m));
    let sc = SamplerConfig { max_block: levels, ..sampler(cfg) };
    let mut named = Vec::new();
    for lv in 1..=levels {
        let mut a = SeqElement::constant(&m, core_diag(&m, &[(lv - 1, 1.0)]))?;
        for n in 1..=m.trunc_len {
            a = a.with_fiber(n, Slot::Zero)?;
        }
        named.push((format!("level {lv}"), a));
    }
    let rep = quasi_regularity_constant(&m, &p, &sc, &named, rng)?;
    let mut r = ExampleReport::new("4.10c", "4.10(c): cone-regular but not quasi-regular");
    r.measure("quasi_regularity", &rep);
    for (lv, (_, ratio)) in rep.witness_ratios.iter().enumerate() {
        r.close(&format!("ratio at level {}", lv + 1), *ratio, (lv + 1) as f64, 1e-9);
    }
    r.at_least("quasi-regularity constant", rep.constant, levels as f64 - 1e-9);
    r.holds("cone-regular", cone_regular_check(&m, &p, &sc, &[], rng)?.passed());
    let est = alpha_sandwich(&m, &p, None)?;
    r.measure("alpha_p", &est);
    r.close("alpha lower bound", est.lower, (levels * levels) as f64, 1e-9);
    r.note("ratios grow without bound as the number of levels grows");
    Ok(r)
}

pub(crate) fn ex_4_10d(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<ExampleReport> {
    let m = model(cfg, ModelSpec { fiber_dim: 2, block: 2, escape_dim: 0, ..small_spec(cfg) })?;
    let p = SeqProjection::structured(&m, vec![gvec(&m, &[(0, 1.0)]), gvec(&m, &[(1, 1.0)])], no_limit(&m))?;
    let sc = sampler(cfg);
    let mut a = CMat::zeros(2, 2);
    a[(0, 0)] = c(1.0);
    a[(0, 1)] = c(1.0);
    let rep = quasi_regularity_constant(&m, &p, &sc, &witness("[[1, 1], [0, 0]]", SeqElement::constant(&m, a)?), rng)?;
    let mut b = CMat::zeros(2, 2);
    b[(0, 1)] = c(1.0);
    b[(1, 0)] = c(1.0);
    let zero = zero_regular_check(&m, &p, &sc, &witness("[[0, 1], [1, 0]]", SeqElement::constant(&m, b)?), rng)?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut r = ExampleReport::new("4.10d", "4.10(d): sqrt(2)-quasi-regular but not 0-regular");
    r.measure("quasi_regularity", &rep);
    r.within("quasi-regularity constant", rep.constant, sqrt2 - 0.02, sqrt2 + 1e-6);
    r.measure("zero_regularity", &zero);
    r.holds("0-regularity counterexample found", !zero.passed());
    Ok(r)
}

/// Unit vectors `cos f e_1 + e^(i psi) sin f e_2` with `f` up to `arcsin t`, plus optionally
/// the escaping class `sqrt(1 - t^2) e_1 + t l_1`.
fn cap_classes(m: &SeqModel, t: f64, escape: bool) -> Vec<CMat> {
    let top = t.asin();
    let mut out = vec![gvec(m, &[(0, 1.0)])];
    for i in 1..=12 {
        let f = top * i as f64 / 12.0;
        for j in 0..32 {
            let psi = TAU * j as f64 / 32.0;
            let mut v = gvec(m, &[(0, f.cos())]);
            v[(1, 0)] = C64::from_polar(f.sin(), psi);
            out.push(v);
        }
    }
    if escape {
        out.push(gvec(m, &[(0, (1.0 - t * t).sqrt()), (m.escape_index(0, 0), t)]));
    }
    out
}

fn s_param(s: f64) -> Result<f64> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(ProjError::Param(format!("s = {s} must be finite and > 1")));
    }
    Ok(s)
}

pub(crate) fn ex_4_13a(cfg: &RunConfig, s: f64, rng: &mut ChaCha8Rng) -> Result<ExampleReport> {
    let s = s_param(s)?;
    let t = (1.0 - 1.0 / s).sqrt();
    let m = model(cfg, ModelSpec { block: 2, ..small_spec(cfg) })?;
    let p = SeqProjection::structured(&m, cap_classes(&m, t, true), no_limit(&m))?;
    let sc = sampler(cfg);
    let e22 = SeqElement::constant(&m, core_diag(&m, &[(1, 1.0)]))?;
    let rep = quasi_regularity_constant(&m, &p, &sc, &witness("e2 e2*", e22), rng)?;
    let k = (s / (s - 1.0)).sqrt();
    let mut r = ExampleReport::new("4.13a", "4.13(a): K-quasi-regular open p with alpha(p) = s and alpha(pbar) = inf");
    r.measure("quasi_regularity", &rep);
    r.close("quasi-regularity constant", rep.constant, k, 0.02);
    let w = Witness::Scaled(SeqElement::constant(&m, core_diag(&m, &[(0, 1.0)]))?);
    r.alpha("alpha_p", &alpha_sandwich(&m, &p, Some(&w))?, s, CLAIM);
    let total = p.clone().with_total(&first_component(&m));
    let pbar = total.closure(&m)?;
    r.alpha("alpha_pbar", &alpha_sandwich(&m, &pbar, None)?, f64::INFINITY, CLAIM);
    r.holds("closure bound degenerates at this K", closure_alpha_bound(s, k).is_err());
    r.note("the unbounded closure is modelled by a total variant of the same classes");
    Ok(r)
}

pub(crate) fn ex_4_13b(cfg: &RunConfig, s: f64, rng: &mut ChaCha8Rng) -> Result<ExampleReport> {
    let s = s_param(s)?;
    let t = (1.0 - 1.0 / s).sqrt();
    let m = model(cfg, ModelSpec { fiber_dim: 2, block: 2, escape_dim: 0, ..small_spec(cfg) })?;
    let p = SeqProjection::structured(&m, cap_classes(&m, t, false), no_limit(&m))?;
    let sc = sampler(cfg);
    let e22 = SeqElement::constant(&m, core_diag(&m, &[(1, 1.0)]))?;
    let rep = quasi_regularity_constant(&m, &p, &sc, &witness("e2 e2*", e22), rng)?;
    let mut r = ExampleReport::new("4.13b", "4.13(b): unital K-quasi-regular example with trivial alpha");
    r.measure("quasi_regularity", &rep);
    r.close("quasi-regularity constant", rep.constant, 1.0 / t, 0.02);
    let one = Witness::Majorize(SeqElement::constant(&m, CMat::identity(2, 2))?);
    r.alpha("alpha_p", &alpha_sandwich(&m, &p, Some(&one))?, 1.0, CLAIM);
    r.alpha("alpha_pbar", &alpha_sandwich(&m, &p.closure(&m)?, Some(&one))?, 1.0, CLAIM);
    Ok(r)
}

pub(crate) fn ex_4_13c(s: f64, t: f64) -> Result<ExampleReport> {
    let s1 = inner_s(s, t)?;
    let k = (s1 / (s1 - 1.0)).sqrt();
    let bound = closure_alpha_bound(s, k)?;
    let mut r = ExampleReport::new("4.13c", "4.13(c): the closure bound is attained by the 3.9 data");
    r.measure_f("K", k);
    r.close("closure bound", bound, t, 1e-12);
    Ok(r)
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Lines in `C^2` from a Fibonacci lattice on the Bloch sphere, so that every line lies
/// within a small angle of one of them.
fn bloch_lines(count: usize) -> Vec<CMat> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let half = 0.5 * z.clamp(-1.0, 1.0).acos();
            let phase = C64::from_polar(half.sin(), golden * i as f64);
            CMat::from_column_slice(2, 1, &[c(half.cos()), phase])
        })
        .collect()
}

pub(crate) fn ex_4_15b(cfg: &RunConfig, k: usize, rng: &mut ChaCha8Rng) -> Result<ExampleReport> {
    if !(2..=4).contains(&k) {
        return Err(ProjError::Param(format!("k = {k} must be 2, 3 or 4")));
    }
    let m = model(cfg, ModelSpec { fiber_dim: k, block: k, escape_dim: 0, ..small_spec(cfg) })?;
    let count = 64 * (k - 1) * (k - 1);
    let classes: Vec<CMat> = if k == 2 {
        bloch_lines(count)
    } else {
        (0..count).map(|_| range_basis(&CMat::from_fn(k, k - 1, |_, _| gaussian(rng)), 1e-10)).collect()
    };
    let p = SeqProjection::structured(&m, classes, no_limit(&m))?;
    let sc = sampler(cfg);
    let below = k_regular_constant(&m, &p, k - 1, &sc, &[], rng)?;
    let big = m.amplified(k)?;
    let mut row = CMat::zeros(big.core_dim(), big.core_dim());
    for j in 0..k {
        row[(0, j * k + j)] = c(1.0);
    }
    let at = k_regular_constant(&m, &p, k, &sc, &witness("e_1 (sum e_j ⊗ e_j)*", SeqElement::constant(&big, row)?), rng)?;
    let mut r = ExampleReport::new("4.15b", "4.15(b): (k-1)-regular but not k-regular");
    r.measure("below", &below);
    r.measure("at_k", &at);
    r.close(&format!("{}-regular constant", k - 1), below.constant, 1.0, 0.05);
    let target = (k as f64 / (k - 1) as f64).sqrt();
    r.close(&format!("{k}-regular witness ratio"), at.witness_ratios[0].1, target, 1e-9);
    if k == 2 {
        r.note(format!("{count} lattice-spread lines stand in for a dense family"));
    } else {
        r.note(format!("{count} seeded Haar-random classes of rank {} stand in for a dense family", k - 1));
    }
    Ok(r)
}
