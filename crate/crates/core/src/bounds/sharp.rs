use serde::Serialize;

use super::closed::{closed_form, Case, ClosedForm};
use super::oracle::{oracle_min, OracleConfig, OracleSolution};
use crate::error::{ProjError, Result};
use crate::linalg::{c, CMat};
use crate::report::inf_f64;
use crate::seqmodel::{
    alpha_sandwich, alpha_state_limit, AlphaEstimate, ModelSpec, SeqElement, SeqModel, SeqProjection, TailKind, Witness,
};

const GRAM_TOL: f64 = 1e-10;

/// Two vectors in the plane with Gram matrix `[[a, b], [b, d]]`.
fn gram_pair(a: f64, b: f64, d: f64) -> Result<([f64; 2], [f64; 2])> {
    if a < -GRAM_TOL || d < -GRAM_TOL {
        return Err(ProjError::Domain(format!("Gram matrix [[{a}, {b}], [{b}, {d}]] is not positive")));
    }
    if a <= GRAM_TOL {
        if b.abs() > 1e-8 {
            return Err(ProjError::Domain(format!("Gram matrix [[{a}, {b}], [{b}, {d}]] is not positive")));
        }
        return Ok(([0.0, 0.0], [0.0, d.max(0.0).sqrt()]));
    }
    let r = a.sqrt();
    let rest = d - b * b / a;
    if rest < -GRAM_TOL {
        return Err(ProjError::Domain(format!("Gram matrix [[{a}, {b}], [{b}, {d}]] is not positive")));
    }
    Ok(([r, 0.0], [b / r, rest.max(0.0).sqrt()]))
}

/// Measurements on the periodic open variant `q^1, q^2` of the case-I construction.
#[derive(Debug, Clone, Serialize)]
pub struct InterleavedVariant {
    pub angle: f64,
    /// State-limit norm of `q^1 ∨ q^2`.
    pub join_state_limit: f64,
    pub closed: [bool; 2],
    /// Rank of the limit fiber of each closure.
    pub closure_limit_rank: [usize; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub case: Case,
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub closed_form: ClosedForm,
    pub oracle: OracleSolution,
    /// Norm of the weak* limit of the states of `s u_n^1 + t u_n^2`.
    pub state_value: f64,
    /// Infimum over all state families carried by the join.
    pub join_state_limit: f64,
    #[serde(with = "inf_f64")]
    pub join_alpha_lower: f64,
    /// Smallest generic angle between `p^1` and `p^2` over all fibers.
    pub angle: f64,
    pub alpha: Vec<AlphaEstimate>,
    pub expected_alpha: [f64; 2],
    pub variant: Option<InterleavedVariant>,
}

/// A built witness: the model, both projections and their join.
#[derive(Debug, Clone)]
pub struct SharpnessWitness {
    pub model: SeqModel,
    pub p: [SeqProjection; 2],
    pub join: SeqProjection,
    pub report: SharpnessReport,
}

/// Model sized for the two-label construction with `n_tail` explicit fibers.
pub fn witness_model(n_tail: usize) -> Result<SeqModel> {
    SeqModel::new(&ModelSpec {
        fiber_dim: n_tail + 8,
        trunc_len: n_tail,
        tail_kind: TailKind::NormLimit,
        block: 2,
        far_dim: 0,
        escape_dim: 2,
        comps: 1,
        extension_t: None,
        ..Default::default()
    })
}

/// Builds `p^1, p^2` whose join attains the bound: base vectors `u^j` with the optimal Gram
/// data and escaping parts `w_n^j`, from the oracle's minimizer.
pub fn sharpness_witness(case: Case, theta: f64, t1: f64, t2: f64, n_tail: usize, cfg: &OracleConfig) -> Result<SharpnessWitness> {
    let cf = closed_form(case, theta, t1, t2)?;
    let sol = oracle_min(case, theta, t1, t2, cfg)?;
    let model = witness_model(n_tail)?;
    let (d1, d2) = sol.delta;
    let (u1, u2) = gram_pair(d1, sol.y, d2)?;
    let (w1, w2) = gram_pair(1.0 - d1, sol.x - sol.y, 1.0 - d2)?;

    let ghost = |u: [f64; 2], w: [f64; 2]| {
        let mut g = CMat::zeros(model.ghost_dim(), 1);
        g[(model.ghost_index(0, 0), 0)] = c(u[0]);
        g[(model.ghost_index(0, 1), 0)] = c(u[1]);
        g[(model.escape_index(0, 0), 0)] = c(w[0]);
        g[(model.escape_index(0, 1), 0)] = c(w[1]);
        g
    };
    let fiber = |u: [f64; 2]| {
        let mut f = CMat::zeros(model.fiber_space_dim(), 1);
        f[(model.fiber_index(0, 0), 0)] = c(u[0]);
        f[(model.fiber_index(0, 1), 0)] = c(u[1]);
        f
    };
    let normalize = |m: CMat| {
        let n = m.norm();
        if n > 0.0 {
            m / c(n)
        } else {
            m
        }
    };
    let g1 = normalize(ghost(u1, w1));
    let g2 = normalize(ghost(u2, w2));
    let r = crate::seqmodel::hcat(&[fiber(u1), fiber(u2)]);
    let limits = match case {
        Case::I => [r.clone(), r.clone()],
        Case::II => [normalize(fiber(u1)), normalize(fiber(u2))],
    };
    let p1 = SeqProjection::structured(&model, vec![g1.clone()], limits[0].clone())?;
    let p2 = SeqProjection::structured(&model, vec![g2.clone()], limits[1].clone())?;

    let v = &g1 * c(sol.s) + &g2 * c(sol.t);
    let state_value = model.weak_limit(&v).norm_squared() / v.norm_squared();
    let join = p1.join(&p2, &model)?;
    let sl = alpha_state_limit(&model, &join)?;
    let angle = p1.angle(&p2, &model)?;

    let rb = crate::linalg::range_basis(&r, crate::linalg::TOL_RANK);
    let core = CMat::from_fn(model.core_dim(), rb.ncols(), |i, k| rb[(i, k)]);
    let a = SeqElement::constant(&model, &core * core.adjoint())?;
    let alpha = [&p1, &p2]
        .iter()
        .map(|p| alpha_sandwich(&model, p, Some(&Witness::Scaled(a.clone()))))
        .collect::<Result<Vec<_>>>()?;

    let variant = match case {
        Case::I => Some(interleaved(&model, &g1, &g2, fiber(u1), fiber(u2))?),
        Case::II => None,
    };

    let report = SharpnessReport {
        case,
        theta,
        theta1: t1,
        theta2: t2,
        closed_form: cf,
        oracle: sol,
        state_value,
        join_state_limit: sl.norm,
        join_alpha_lower: sl.alpha_lower,
        angle,
        alpha,
        expected_alpha: [1.0 / t1.cos().powi(2), 1.0 / t2.cos().powi(2)],
        variant,
    };
    Ok(SharpnessWitness { model, p: [p1, p2], join, report })
}

/// Period-3 open projections: `q^1` runs through `p^1`, the line of `u^1`, then nothing;
/// `q^2` through `p^2`, nothing, then the line of `u^2`; both vanish at infinity.
fn interleaved(model: &SeqModel, g1: &CMat, g2: &CMat, f1: CMat, f2: CMat) -> Result<InterleavedVariant> {
    let unit = |m: CMat| {
        let n = m.norm();
        model.lift(&(m / c(n)))
    };
    let empty = CMat::zeros(model.ghost_dim(), 0);
    let none = CMat::zeros(model.fiber_space_dim(), 0);
    let q1 = SeqProjection::structured(model, vec![g1.clone(), unit(f1), empty.clone()], none.clone())?;
    let q2 = SeqProjection::structured(model, vec![g2.clone(), empty, unit(f2)], none)?;
    let join = q1.join(&q2, model)?;
    let (c1, c2) = (q1.closure(model)?, q2.closure(model)?);
    Ok(InterleavedVariant {
        angle: q1.angle(&q2, model)?,
        join_state_limit: alpha_state_limit(model, &join)?.norm,
        closed: [q1.is_closed(model)?, q2.is_closed(model)?],
        closure_limit_rank: [c1.limit.ncols(), c2.limit.ncols()],
    })
}
