//! Estimates of `alpha(p) = inf { |a| : a = a*, p <= pap }`.

use serde::Serialize;

use super::element::{SeqElement, Slot};
use super::extrapolate::{extrapolate, LimitFit};
use super::model::{FiberId, SeqModel};
use super::projection::SeqProjection;
use crate::error::{ProjError, Result};
use crate::linalg::{c, hermitian_eigen, CMat, HermitianMatrix};
use crate::report::inf_f64;

/// Certificate for an upper bound on `alpha(p)`.
#[derive(Debug, Clone)]
pub enum Witness {
    /// `p <= pap` must hold as given; bound `|a|`.
    Compress(SeqElement),
    /// `pap >= eps p` for some `eps > 0`; bound `|a| / eps`.
    Scaled(SeqElement),
    /// `p <= a`; bound 1.
    Majorize(SeqElement),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    Trivial,
    StateLimit,
    SpectraExtrapolation,
    SpectraCutoff,
    Witness,
    Majorization,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaEstimate {
    #[serde(with = "inf_f64")]
    pub lower: f64,
    #[serde(with = "inf_f64")]
    pub upper: f64,
    pub lower_source: BoundSource,
    pub upper_source: BoundSource,
    pub eps_sequence: Vec<(usize, f64)>,
    pub flags: Vec<String>,
}

impl AlphaEstimate {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        if value.is_infinite() {
            return self.lower.is_infinite();
        }
        self.lower <= value + tol && value <= self.upper + tol
    }

    pub fn width(&self) -> f64 {
        if self.upper.is_infinite() && self.lower.is_infinite() {
            0.0
        } else {
            self.upper - self.lower
        }
    }
}

/// Basis and hermitian action of `a` at every fiber where `p` has range.
pub(crate) fn fiber_blocks(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> Vec<(FiberId, CMat, CMat)> {
    let mut out = Vec::new();
    let limit_action = model.fiber_action(a, None);
    for (k, b) in p.fibers.iter().enumerate() {
        if b.ncols() == 0 {
            continue;
        }
        let act = match a.fibers[k] {
            Slot::Limit => limit_action.clone(),
            _ => model.fiber_action(a, Some(k + 1)),
        };
        out.push((FiberId::Explicit(k + 1), b.clone(), act));
    }
    if p.limit.ncols() > 0 {
        out.push((FiberId::Limit, p.limit.clone(), limit_action));
    }
    if p.tail.iter().any(|t| t.rank() > 0) {
        let ghost = model.ghost_action(a);
        for (k, t) in p.tail.iter().enumerate() {
            if t.rank() > 0 {
                out.push((FiberId::Tail(k), t.basis.clone(), ghost.clone()));
            }
        }
    }
    if let Some(cm) = &p.complement {
        out.push((FiberId::Complement, cm.basis.clone(), model.complement_action(a)));
    }
    if p.scalar {
        out.push((FiberId::Scalar, CMat::from_element(1, 1, c(1.0)), CMat::from_element(1, 1, a.scalar)));
    }
    out
}

fn require_self_adjoint(a: &SeqElement) -> Result<()> {
    if a.is_self_adjoint(1e-10) {
        Ok(())
    } else {
        Err(ProjError::NotHermitian(
            (&a.limit - a.limit.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max),
        ))
    }
}

/// `min` over fibers of the smallest eigenvalue of `a` compressed to the range of `p`,
/// and the fiber where it occurs.
pub fn compression_floor(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> Result<(f64, FiberId)> {
    require_self_adjoint(a)?;
    let mut best = (f64::INFINITY, FiberId::Limit);
    for (id, b, act) in fiber_blocks(model, p, a) {
        let v = hermitian_eigen(&HermitianMatrix::from_upper(&act).compress(&b))?.min();
        if v < best.0 {
            best = (v, id);
        }
    }
    Ok(best)
}

/// Checks `p <= pap` on every fiber and returns `|a|`.
pub fn alpha_witness(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> Result<f64> {
    let (floor, fiber) = compression_floor(model, p, a)?;
    if floor < 1.0 - model.tol.tol_psd {
        return Err(ProjError::WitnessRejected { fiber, margin: floor - 1.0 });
    }
    Ok(model.element_norm(a))
}

/// `|a| / eps` where `eps` is the compression floor of `a` on `p`.
pub fn scaled_witness_bound(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> Result<f64> {
    let (floor, fiber) = compression_floor(model, p, a)?;
    if floor <= model.tol.tol_psd {
        return Err(ProjError::WitnessRejected { fiber, margin: floor });
    }
    Ok(model.element_norm(a) / floor)
}

/// Checks `p <= a` on every fiber.
pub fn majorization_check(model: &SeqModel, p: &SeqProjection, a: &SeqElement) -> Result<()> {
    require_self_adjoint(a)?;
    for (id, b, act) in fiber_blocks(model, p, a) {
        let diff = HermitianMatrix::from_upper(&(act - &b * b.adjoint()));
        let v = hermitian_eigen(&diff)?.min();
        if v < -model.tol.tol_psd {
            return Err(ProjError::WitnessRejected { fiber: id, margin: v });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct StateLimit {
    /// Infimum of the norms of weak* limits of states supported by `p`.
    pub norm: f64,
    #[serde(with = "inf_f64")]
    pub alpha_lower: f64,
    pub argmin: FiberId,
    /// Limit norm of the vector states of each tail generator.
    pub generator_values: Vec<(FiberId, f64)>,
}

/// Quadratic form on the ghost space giving the norm of the weak* limit of vector states:
/// truncated and far coordinates count fully, escape labels only through the extension.
fn limit_norm_form(model: &SeqModel) -> CMat {
    let g = model.ghost_comp_dim();
    let fd = model.fiber_comp_dim();
    let mut m = CMat::zeros(model.ghost_dim(), model.ghost_dim());
    for comp in 0..model.comps {
        for i in 0..fd {
            m[(comp * g + i, comp * g + i)] = c(1.0);
        }
    }
    if let Some(ext) = &model.extension {
        let e = ext.e_prime().as_mat();
        for ca in 0..2 {
            for cb in 0..2 {
                for l in 0..model.escape_dim {
                    m[(model.escape_index(ca, l), model.escape_index(cb, l))] = e[(ca, cb)];
                }
            }
        }
    }
    m
}

/// Exact weak* limits of the state families carried by a structured projection.
pub fn alpha_state_limit(model: &SeqModel, p: &SeqProjection) -> Result<StateLimit> {
    if !p.meta.structured {
        return Err(ProjError::NoStateFamilies("explicit tail".into()));
    }
    if p.is_zero() {
        return Ok(StateLimit { norm: 1.0, alpha_lower: 1.0, argmin: FiberId::Limit, generator_values: vec![] });
    }
    let mut best = (f64::INFINITY, FiberId::Limit);
    let mut consider = |v: f64, id: FiberId| {
        if v < best.0 {
            best = (v, id);
        }
    };
    if let Some(n) = p.fibers.iter().position(|b| b.ncols() > 0) {
        consider(1.0, FiberId::Explicit(n + 1));
    }
    if p.limit.ncols() > 0 {
        consider(1.0, FiberId::Limit);
    }
    if p.scalar {
        consider(1.0, FiberId::Scalar);
    }
    if let Some(cm) = &p.complement {
        let v = match &model.extension {
            Some(ext) => hermitian_eigen(&ext.e_prime().as_hermitian().compress(&cm.basis))?.min(),
            None => 0.0,
        };
        consider(v, FiberId::Complement);
    }
    let form = HermitianMatrix::from_upper(&limit_norm_form(model));
    let mut generator_values = Vec::new();
    for (k, t) in p.tail.iter().enumerate() {
        if t.rank() == 0 {
            continue;
        }
        consider(hermitian_eigen(&form.compress(&t.basis))?.min(), FiberId::Tail(k));
        for j in 0..t.gens.ncols() {
            let g = t.gens.column(j);
            let v = (g.adjoint() * form.as_mat() * g)[(0, 0)].re;
            generator_values.push((FiberId::Tail(k), v));
        }
    }
    let norm = best.0.max(0.0);
    let alpha_lower = if norm <= 1e-12 { f64::INFINITY } else { (1.0 / norm).max(1.0) };
    Ok(StateLimit { norm, alpha_lower, argmin: best.1, generator_values })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectraResult {
    pub eps: Vec<(usize, f64)>,
    pub fit: LimitFit,
    /// `1 / max eps_i`: each cutoff `e_i / eps_i` is a witness.
    #[serde(with = "inf_f64")]
    pub upper: f64,
    /// Lower end from the extrapolated limit, when the cutoffs exhaust the model.
    pub lower: Option<f64>,
    pub flags: Vec<String>,
}

/// `eps_i = min spec(p e_i p)` on the range of `p`, for the diagonal cutoffs `e_i`.
pub fn alpha_spectra(model: &SeqModel, p: &SeqProjection, schedule: &[usize]) -> Result<SpectraResult> {
    if model.extension.is_some() {
        return Err(ProjError::Unsupported("cutoff spectra in extension models".into()));
    }
    if schedule.is_empty() {
        return Err(ProjError::Param("empty cutoff schedule".into()));
    }
    let mut flags = Vec::new();
    if p.is_zero() {
        let fit = extrapolate(&[1.0], &[1.0]);
        return Ok(SpectraResult { eps: schedule.iter().map(|&i| (i, 1.0)).collect(), fit, upper: 1.0, lower: Some(1.0), flags });
    }
    let mut eps = Vec::with_capacity(schedule.len());
    for &i in schedule {
        let q = model.cutoff(i)?;
        let e = SeqElement::constant(model, q)?;
        let v = if p.complement.is_some() { 0.0 } else { compression_floor(model, p, &e)?.0 };
        eps.push((i, v.clamp(0.0, 1.0)));
    }
    let xs: Vec<f64> = eps.iter().map(|(i, _)| *i as f64).collect();
    let ys: Vec<f64> = eps.iter().map(|(_, v)| *v).collect();
    let fit = extrapolate(&xs, &ys);
    if fit.unreliable {
        flags.push("extrapolation unreliable: eps_i decreases in the tail".into());
    }
    // levels under the floor are rounding, not witnesses
    let best = ys.iter().cloned().filter(|&v| v >= model.tol.eps_floor).fold(0.0, f64::max);
    let upper = if best > 0.0 { 1.0 / best } else { f64::INFINITY };
    let last = *ys.last().expect("schedule is nonempty");
    let lower = if model.far_dim > 0 {
        flags.push("cutoffs do not reach the far axes; extrapolated lower end not used".into());
        None
    } else if last < model.tol.eps_floor {
        Some(f64::INFINITY)
    } else {
        let top = (fit.limit + fit.error).min(1.0);
        Some(if top > 0.0 { 1.0 / top } else { f64::INFINITY })
    };
    Ok(SpectraResult { eps, fit, upper, lower, flags })
}

/// Full cutoff schedule `1..=d`.
pub fn default_schedule(model: &SeqModel) -> Vec<usize> {
    (1..=model.fiber_dim).collect()
}

/// Interval for `alpha(p)` combining the state limit, the cutoff spectra and an optional
/// witness.
pub fn alpha_sandwich(model: &SeqModel, p: &SeqProjection, witness: Option<&Witness>) -> Result<AlphaEstimate> {
    let mut est = AlphaEstimate {
        lower: 1.0,
        upper: f64::INFINITY,
        lower_source: BoundSource::Trivial,
        upper_source: BoundSource::Trivial,
        eps_sequence: vec![],
        flags: vec![],
    };
    if p.is_zero() {
        est.upper = 1.0;
        return Ok(est);
    }
    let raise = |est: &mut AlphaEstimate, v: f64, src: BoundSource| {
        if v > est.lower {
            est.lower = v;
            est.lower_source = src;
        }
    };
    let lower_fn = |est: &mut AlphaEstimate, v: f64, src: BoundSource| {
        if v < est.upper {
            est.upper = v;
            est.upper_source = src;
        }
    };
    if p.meta.structured {
        let sl = alpha_state_limit(model, p)?;
        raise(&mut est, sl.alpha_lower, BoundSource::StateLimit);
    }
    if model.extension.is_none() {
        let sp = alpha_spectra(model, p, &default_schedule(model))?;
        if let Some(l) = sp.lower {
            raise(&mut est, l, BoundSource::SpectraExtrapolation);
        }
        lower_fn(&mut est, sp.upper, BoundSource::SpectraCutoff);
        est.eps_sequence = sp.eps;
        est.flags.extend(sp.flags);
    }
    match witness {
        Some(Witness::Compress(a)) => lower_fn(&mut est, alpha_witness(model, p, a)?, BoundSource::Witness),
        Some(Witness::Scaled(a)) => lower_fn(&mut est, scaled_witness_bound(model, p, a)?, BoundSource::Witness),
        Some(Witness::Majorize(a)) => {
            majorization_check(model, p, a)?;
            lower_fn(&mut est, 1.0, BoundSource::Majorization);
        }
        None => {}
    }
    let slack = model.tol.tol_alpha * est.upper.max(1.0);
    if est.upper.is_finite() && est.lower > est.upper + slack {
        return Err(ProjError::Inconsistent { lower: est.lower, upper: est.upper });
    }
    Ok(est)
}
