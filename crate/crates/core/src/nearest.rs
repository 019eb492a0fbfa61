//! Relatively compact, open and closed projections near a given projection, built from a
//! witness `a` with `p <= pap`.

use serde::Serialize;

use crate::error::{ProjError, Result};
use crate::linalg::{
    apply_fn, hermitian_eigen, op_norm, range_basis, sqrt_psd, spectral_projection, CMat, FinProjection,
    HermitianMatrix, Interval, TOL_RANK,
};
use crate::report::inf_f64;
use crate::seqmodel::{alpha_witness, compression_floor, FamilyMeta, FiberId, SeqElement, SeqModel, SeqProjection, Slot, TailClass};

/// `sqrt(1 - 1/alpha)`, with `alpha = inf` giving 1.
pub fn dist_from_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha.is_infinite() {
        return Ok(1.0);
    }
    Ok((1.0 - 1.0 / alpha).max(0.0).sqrt())
}

/// `arccos(alpha^(-1/2))`, with `alpha = inf` giving `pi/2`.
pub fn d_a_from_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha.is_infinite() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    Ok(alpha.powf(-0.5).clamp(0.0, 1.0).acos())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha < 1.0 {
        return Err(ProjError::Domain(format!("alpha = {alpha} must be at least 1")));
    }
    Ok(())
}

fn require_plain(model: &SeqModel, p: &SeqProjection) -> Result<()> {
    if model.extension.is_some() {
        return Err(ProjError::Unsupported("candidate constructions in extension models".into()));
    }
    if p.complement.is_some() {
        return Err(ProjError::Domain("projection has an escaping complement, so no witness exists".into()));
    }
    Ok(())
}

/// Applies `f` to the core of every fiber of `a`, sharing the work for fibers that equal
/// the limit. Returns explicit-fiber images (1-based order) and the limit image.
fn per_fiber<T: Clone>(a: &SeqElement, f: impl Fn(&CMat) -> Result<T>) -> Result<(Vec<T>, T)> {
    let lim = f(&a.limit)?;
    let mut zero: Option<T> = None;
    let mut out = Vec::with_capacity(a.fibers.len());
    for (k, s) in a.fibers.iter().enumerate() {
        out.push(match s {
            Slot::Limit => lim.clone(),
            Slot::Zero => match &zero {
                Some(z) => z.clone(),
                None => {
                    let z = f(&a.fiber_core(k + 1))?;
                    zero = Some(z.clone());
                    z
                }
            },
            Slot::Own(m) => f(m)?,
        });
    }
    Ok((out, lim))
}

fn projector(b: &CMat) -> CMat {
    b * b.adjoint()
}

#[derive(Debug, Clone, Serialize)]
pub struct RcCandidate {
    pub eps: f64,
    pub witness_norm: f64,
    /// `|p - r|`.
    pub distance: f64,
    /// `sqrt(1 - (1 - eps)/|a|)`.
    pub bound: f64,
    /// Largest entry of `prp - pqp` over fibers.
    pub prp_residual: f64,
    /// `r <= q` on every fiber.
    pub dominated: bool,
    #[serde(skip)]
    pub r: SeqProjection,
}

/// With `q = E_[eps, inf)(a)`, the range projection `r` of `qp`, fiber by fiber.
pub fn rc_candidate(model: &SeqModel, p: &SeqProjection, a: &SeqElement, eps: f64) -> Result<RcCandidate> {
    require_plain(model, p)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ProjError::Domain(format!("eps = {eps} must lie in (0, 1)")));
    }
    let norm = alpha_witness(model, p, a)?;
    let cut = |x: &CMat| -> Result<CMat> {
        let h = HermitianMatrix::new(x.clone())?;
        Ok(spectral_projection(&h, Interval::at_least(eps))?.as_mat().clone())
    };
    let (q_fibers, q_lim) = per_fiber(a, cut)?;
    let mut residual: f64 = 0.0;
    let mut dominated = true;
    let mut track = |bp: &CMat, br: &CMat, q: &CMat| {
        let diff = bp.adjoint() * (projector(br) - q) * bp;
        residual = residual.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
        let leak = br - q * br;
        if leak.iter().any(|z| z.norm() > 1e-8) {
            dominated = false;
        }
    };
    let mut fibers = Vec::with_capacity(p.fibers.len());
    for (bp, qc) in p.fibers.iter().zip(&q_fibers) {
        let q = model.embed_fiber(qc);
        let br = range_basis(&(&q * bp), TOL_RANK);
        track(bp, &br, &q);
        fibers.push(br);
    }
    let q_inf = model.embed_fiber(&q_lim);
    let limit = range_basis(&(&q_inf * &p.limit), TOL_RANK);
    track(&p.limit, &limit, &q_inf);
    let q_ghost = model.embed_ghost(&q_lim);
    let mut tail = Vec::with_capacity(p.tail.len());
    for t in &p.tail {
        let br = range_basis(&(&q_ghost * &t.basis), TOL_RANK);
        track(&t.basis, &br, &q_ghost);
        tail.push(TailClass { gens: br.clone(), basis: br });
    }
    let r = SeqProjection {
        fibers,
        limit,
        tail,
        complement: None,
        scalar: false,
        meta: FamilyMeta { structured: true, ..Default::default() },
    };
    let distance = p.norm_distance(&r, model)?;
    let bound = (1.0 - (1.0 - eps) / norm).max(0.0).sqrt();
    Ok(RcCandidate { eps, witness_norm: norm, distance, bound, prp_residual: residual, dominated, r })
}

/// Geometric grid of `count` cut levels between `lo` and 1.
pub fn eps_grid(lo: f64, count: usize) -> Vec<f64> {
    let lo = lo.clamp(1e-6, 0.5);
    let hi = 1.0 - 1e-3;
    (0..count).map(|k| lo * (hi / lo).powf(k as f64 / (count.max(2) - 1) as f64)).collect()
}

/// Candidates over a sweep of cut levels; levels landing on an eigenvalue are skipped.
pub fn rc_sweep(model: &SeqModel, p: &SeqProjection, a: &SeqElement, levels: &[f64]) -> Result<Vec<RcCandidate>> {
    let mut out = Vec::new();
    for &eps in levels {
        match rc_candidate(model, p, a, eps) {
            Ok(c) => out.push(c),
            Err(ProjError::AmbiguousCut { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateMode {
    Open,
    Closed,
}

/// Ramp vanishing on `[0, delta]`, linear on `[delta, 2 delta]` and the identity above.
pub fn ramp(delta: f64, x: f64) -> f64 {
    if x <= delta {
        0.0
    } else if x <= 2.0 * delta {
        2.0 * (x - delta)
    } else {
        x
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenClosedCandidate {
    pub mode: CandidateMode,
    pub eps_effective: f64,
    pub distance: f64,
    /// `sqrt(1 - eps_effective)`.
    pub bound: f64,
    /// Smallest eigenvalue of `pqp - pap` on the range of `p`, over fibers.
    pub pqp_margin: f64,
    /// Largest entry of `q^2 - q` over explicit fibers.
    pub idempotence_error: f64,
    /// `q <= range(a)` on every fiber.
    pub dominated_by_range: bool,
    pub compact_in_model: bool,
    #[serde(skip)]
    pub q: SeqProjection,
}

/// `q = a^(1/2) p (pap)^(-1) p a^(1/2)` fiber by fiber, for `0 <= a <= 1` with
/// `pap >= eps p`. In open mode `a` is first replaced by `ramp(delta, a)`, which lowers
/// the effective `eps` by `2 delta`.
pub fn open_closed_candidate(
    model: &SeqModel,
    p: &SeqProjection,
    a: &SeqElement,
    eps: f64,
    mode: CandidateMode,
    delta: f64,
) -> Result<OpenClosedCandidate> {
    require_plain(model, p)?;
    let tol = model.tol.tol_psd;
    for (k, core) in std::iter::once(&a.limit).chain(a.fibers.iter().filter_map(|s| match s {
        Slot::Own(m) => Some(m),
        _ => None,
    })).enumerate() {
        let e = hermitian_eigen(&HermitianMatrix::new(core.clone())?)?;
        if e.min() < -tol || e.max() > 1.0 + tol {
            return Err(ProjError::Domain(format!("element core {k} has spectrum outside [0, 1]")));
        }
    }
    let (floor, fiber) = compression_floor(model, p, a)?;
    if floor < eps - tol {
        return Err(ProjError::WitnessRejected { fiber, margin: floor - eps });
    }
    let (a_used, eps_eff) = match mode {
        CandidateMode::Closed => (a.clone(), eps),
        CandidateMode::Open => {
            if !(delta > 0.0 && 2.0 * delta < eps) {
                return Err(ProjError::Domain(format!("delta = {delta} must lie in (0, eps/2)")));
            }
            let f = |m: &CMat| {
                apply_fn(&HermitianMatrix::from_upper(m), |x| ramp(delta, x)).expect("hermitian input").into_mat()
            };
            (a.map(f), eps - 2.0 * delta)
        }
    };
    let (roots, root_lim) = per_fiber(&a_used, |m| Ok(sqrt_psd(&HermitianMatrix::from_upper(m))?.into_mat()))?;
    let (ranges, range_lim) = per_fiber(&a_used, |m| Ok(range_basis(m, TOL_RANK)))?;

    let mut margin = f64::INFINITY;
    let mut idem: f64 = 0.0;
    let mut dominated = true;
    let mut build = |bp: &CMat, s: &CMat, rng: &CMat| -> Result<CMat> {
        if bp.ncols() == 0 {
            return Ok(bp.clone());
        }
        let sb = s * bp;
        let gram = HermitianMatrix::from_upper(&(sb.adjoint() * &sb));
        let inv_root = apply_fn(&gram, |x| if x > 0.0 { x.powf(-0.5) } else { 0.0 })?;
        let u = &sb * inv_root.as_mat();
        let q = projector(&u);
        idem = idem.max((&q * &q - &q).iter().map(|z| z.norm()).fold(0.0, f64::max));
        let a_fiber = s * s;
        let gap = HermitianMatrix::from_upper(&(bp.adjoint() * (&q - &a_fiber) * bp));
        margin = margin.min(hermitian_eigen(&gap)?.min());
        let leak = &u - projector(rng) * &u;
        if leak.iter().any(|z| z.norm() > 1e-7) {
            dominated = false;
        }
        Ok(u)
    };
    let mut fibers = Vec::with_capacity(p.fibers.len());
    for ((bp, s), rg) in p.fibers.iter().zip(&roots).zip(&ranges) {
        fibers.push(build(bp, &model.embed_fiber(s), &model.embed_fiber_cols(rg))?);
    }
    let limit = build(&p.limit, &model.embed_fiber(&root_lim), &model.embed_fiber_cols(&range_lim))?;
    let s_ghost = model.embed_ghost(&root_lim);
    let r_ghost = model.lift(&model.embed_fiber_cols(&range_lim));
    let mut tail = Vec::with_capacity(p.tail.len());
    for t in &p.tail {
        let u = build(&t.basis, &s_ghost, &r_ghost)?;
        tail.push(TailClass { gens: u.clone(), basis: u });
    }
    let q = SeqProjection {
        fibers,
        limit,
        tail,
        complement: None,
        scalar: false,
        meta: FamilyMeta { structured: true, ..Default::default() },
    };
    let distance = p.norm_distance(&q, model)?;
    let compact_in_model = q.is_compact_in_model(model)?;
    Ok(OpenClosedCandidate {
        mode,
        eps_effective: eps_eff,
        distance,
        bound: (1.0 - eps_eff).max(0.0).sqrt(),
        pqp_margin: margin,
        idempotence_error: idem,
        dominated_by_range: dominated,
        compact_in_model,
        q,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum LemmaOutcome {
    Pass { margin: f64 },
    Fail { margin: f64 },
    Skipped { reason: String },
}

impl LemmaOutcome {
    pub fn failed(&self) -> bool {
        matches!(self, LemmaOutcome::Fail { .. })
    }
}

/// Checks `p a^(1/2) (pap)^(-1) a^(1/2) p >= pap` for `0 <= a <= 1` with `pap >= eps p`,
/// `eps > 1e-6`, the inverse taken on the range of `p`.
pub fn compression_inverse_check(p: &FinProjection, a: &HermitianMatrix) -> Result<LemmaOutcome> {
    if p.dim() != a.dim() {
        return Err(ProjError::Dimension(format!("p is {}, a is {}", p.dim(), a.dim())));
    }
    let e = hermitian_eigen(a)?;
    if e.min() < -1e-12 || e.max() > 1.0 + 1e-12 {
        return Ok(LemmaOutcome::Skipped { reason: "a is not between 0 and 1".into() });
    }
    let b = p.basis();
    if b.ncols() == 0 {
        return Ok(LemmaOutcome::Skipped { reason: "p = 0".into() });
    }
    let pap = a.compress(&b);
    let floor = hermitian_eigen(&pap)?.min();
    if floor <= 1e-6 {
        return Ok(LemmaOutcome::Skipped { reason: format!("pap floor {floor:e} too small") });
    }
    let root = sqrt_psd(a)?;
    let inv = apply_fn(&pap, |x| 1.0 / x)?;
    let rb = root.as_mat() * &b;
    // b* a^(1/2) b (b* a b)^(-1) b* a^(1/2) b, compared with b* a b
    let m = b.adjoint() * &rb;
    let lhs = HermitianMatrix::from_upper(&(m.adjoint() * inv.as_mat() * &m));
    let margin = hermitian_eigen(&lhs.sub(&pap))?.min();
    let scale = op_norm(pap.as_mat()).max(1.0);
    Ok(if margin >= -1e-9 * scale { LemmaOutcome::Pass { margin } } else { LemmaOutcome::Fail { margin } })
}

/// Fiber where a witness fails, when it does.
pub fn witness_margin(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> Result<(f64, FiberId)> {
    compression_floor(model, p, a)
}


#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    #[serde(with = "inf_f64")]
    pub alpha: f64,
    pub predicted: f64,
    pub best_distance: f64,
    pub min_bound: f64,
    pub candidates: usize,
}
