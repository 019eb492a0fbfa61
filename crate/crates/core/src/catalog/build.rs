//! Small constructors shared by the catalog builders.

use crate::config::RunConfig;
use crate::error::Result;
use crate::linalg::{c, CMat};
use crate::seqmodel::{ModelSpec, SeqModel};

/// Default model: `d >= N + 16` so that escape axes never crowd the base block.
pub(crate) fn spec(cfg: &RunConfig) -> ModelSpec {
    ModelSpec {
        fiber_dim: cfg.fiber_dim.max(cfg.trunc + 16),
        trunc_len: cfg.trunc,
        budget: cfg.budget,
        ..Default::default()
    }
}

/// Smaller model for the sampled regularity entries.
pub(crate) fn small_spec(cfg: &RunConfig) -> ModelSpec {
    ModelSpec { fiber_dim: 16, trunc_len: 12, budget: cfg.budget, ..Default::default() }
}

pub(crate) fn model(cfg: &RunConfig, spec: ModelSpec) -> Result<SeqModel> {
    Ok(SeqModel::new(&spec)?.with_tolerances(cfg.tolerances))
}

/// Column vector of length `n` with the given entries.
pub(crate) fn col(n: usize, entries: &[(usize, f64)]) -> CMat {
    let mut v = CMat::zeros(n, 1);
    for &(i, x) in entries {
        v[(i, 0)] += c(x);
    }
    v
}

/// Ghost-space column.
pub(crate) fn gvec(m: &SeqModel, entries: &[(usize, f64)]) -> CMat {
    col(m.ghost_dim(), entries)
}

/// Fiber-space column.
pub(crate) fn fvec(m: &SeqModel, entries: &[(usize, f64)]) -> CMat {
    col(m.fiber_space_dim(), entries)
}

pub(crate) fn no_limit(m: &SeqModel) -> CMat {
    CMat::zeros(m.fiber_space_dim(), 0)
}

/// Diagonal element core.
pub(crate) fn core_diag(m: &SeqModel, entries: &[(usize, f64)]) -> CMat {
    let mut x = CMat::zeros(m.core_dim(), m.core_dim());
    for &(i, v) in entries {
        x[(i, i)] += c(v);
    }
    x
}

pub(crate) fn core_identity(m: &SeqModel) -> CMat {
    CMat::identity(m.core_dim(), m.core_dim())
}

/// `1 x 1` component basis `[1]`, or `[1; 0]` in a doubled model.
pub(crate) fn first_component(m: &SeqModel) -> CMat {
    col(m.comps, &[(0, 1.0)])
}

pub(crate) fn all_components(m: &SeqModel) -> CMat {
    CMat::identity(m.comps, m.comps)
}

/// Each positive integer infinitely often: `1, 1, 2, 1, 2, 3, ...`.
pub(crate) fn diagonal_enumeration(len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    let mut top = 1;
    while out.len() < len {
        for k in 1..=top {
            if out.len() == len {
                break;
            }
            out.push(k);
        }
        top += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_prefix() {
        assert_eq!(diagonal_enumeration(7), vec![1, 1, 2, 1, 2, 3, 1]);
    }
}
