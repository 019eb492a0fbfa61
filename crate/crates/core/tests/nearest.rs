use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;

use projkit::linalg::{c, CMat, FinProjection, HermitianMatrix, C64};
use projkit::nearest::{
    compression_inverse_check, d_a_from_alpha, dist_from_alpha, eps_grid, open_closed_candidate, ramp, rc_candidate,
    rc_sweep, CandidateMode,
};
use projkit::seqmodel::{ModelSpec, SeqElement, SeqModel, SeqProjection};
use projkit::ProjError;

fn small_model() -> SeqModel {
    SeqModel::new(&ModelSpec { fiber_dim: 24, trunc_len: 8, budget: 4096, ..Default::default() }).unwrap()
}

fn column(n: usize, entries: &[(usize, f64)]) -> CMat {
    let mut v = CMat::zeros(n, 1);
    for &(i, x) in entries {
        v[(i, 0)] = c(x);
    }
    v
}

fn diag_element(m: &SeqModel, i: usize, v: f64) -> SeqElement {
    let mut x = CMat::zeros(m.core_dim(), m.core_dim());
    x[(i, i)] = c(v);
    SeqElement::constant(m, x).unwrap()
}

/// Escaping tail at angle `theta` to `e_0`, with or without the limit line `e_0`.
fn tilted(m: &SeqModel, theta: f64, with_limit: bool) -> SeqProjection {
    let v = column(m.ghost_dim(), &[(0, theta.cos()), (m.escape_index(0, 0), theta.sin())]);
    let lim = if with_limit { column(m.fiber_space_dim(), &[(0, 1.0)]) } else { CMat::zeros(m.fiber_space_dim(), 0) };
    SeqProjection::structured(m, vec![v], lim).unwrap()
}

fn unit_interval_matrix(n: usize, re: &[f64], im: &[f64]) -> HermitianMatrix {
    let b = CMat::from_fn(n, n, |i, j| C64::new(re[i * n + j], im[i * n + j]));
    let g = &b * b.adjoint();
    let top = g.clone().singular_values().iter().cloned().fold(0.0, f64::max).max(1e-12);
    HermitianMatrix::from_upper(&g.map(|z| z / top))
}

#[test]
fn distance_from_alpha_at_reference_values() {
    assert_eq!(dist_from_alpha(1.0).unwrap(), 0.0);
    assert!((dist_from_alpha(2.0).unwrap() - 0.5f64.sqrt()).abs() <= 1e-15);
    assert!((dist_from_alpha(4.0).unwrap() - 0.75f64.sqrt()).abs() <= 1e-15);
    assert_eq!(dist_from_alpha(f64::INFINITY).unwrap(), 1.0);
    assert_eq!(d_a_from_alpha(f64::INFINITY).unwrap(), FRAC_PI_2);
    assert_eq!(d_a_from_alpha(1.0).unwrap(), 0.0);
    assert!(matches!(dist_from_alpha(0.5), Err(ProjError::Domain(_))));
    assert!(dist_from_alpha(f64::NAN).is_err());
}

#[test]
fn ramp_vanishes_then_joins_the_identity() {
    let d = 0.1;
    assert_eq!(ramp(d, 0.05), 0.0);
    assert_eq!(ramp(d, d), 0.0);
    assert!((ramp(d, 0.15) - 0.1).abs() <= 1e-15);
    assert!((ramp(d, 2.0 * d) - 2.0 * d).abs() <= 1e-15);
    assert_eq!(ramp(d, 0.7), 0.7);
}

#[test]
fn eps_grid_is_increasing_inside_the_unit_interval() {
    let g = eps_grid(0.02, 16);
    assert_eq!(g.len(), 16);
    assert!((g[0] - 0.02).abs() <= 1e-15);
    assert!(g.windows(2).all(|w| w[0] < w[1]));
    assert!(*g.last().unwrap() < 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sine_of_d_a_is_the_distance(theta in 0.0f64..1.55) {
        let alpha = 1.0 / theta.cos().powi(2);
        let da = d_a_from_alpha(alpha).unwrap();
        prop_assert!((da - theta).abs() <= 1e-7);
        prop_assert!((da.sin() - dist_from_alpha(alpha).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn compression_inverse_dominates_compression(
        n in 2usize..=6,
        k in 1usize..=5,
        re in prop::collection::vec(-1.0f64..1.0, 36),
        im in prop::collection::vec(-1.0f64..1.0, 36),
    ) {
        let k = k.min(n);
        let a = unit_interval_matrix(n, &re, &im);
        let q = CMat::from_fn(n, k, |i, j| C64::new(im[(i * 6 + j) % 36], re[(j * 6 + i) % 36])).qr().q();
        let p = FinProjection::from_orthonormal(&q.columns(0, k).into_owned());
        let out = compression_inverse_check(&p, &a).unwrap();
        prop_assert!(!out.failed(), "{out:?}");
    }
}

#[test]
fn rc_candidates_stay_below_their_bounds() {
    let m = small_model();
    for &theta in &[0.3f64, 0.8, 1.2] {
        let q = tilted(&m, theta, false);
        let s = 1.0 / theta.cos().powi(2);
        let a = diag_element(&m, 0, s);
        let target = theta.sin();
        let cands = rc_sweep(&m, &q, &a, &eps_grid(0.02, 16)).unwrap();
        assert!(!cands.is_empty());
        let mut best = f64::INFINITY;
        for cand in &cands {
            assert!(cand.dominated);
            assert!(cand.distance <= cand.bound + 1e-9, "{} > {}", cand.distance, cand.bound);
            assert!(cand.distance >= target - 1e-9);
            best = best.min(cand.distance);
        }
        assert!((best - target).abs() <= 0.02, "theta {theta}: {best} vs {target}");
    }
}

#[test]
fn cut_levels_outside_the_unit_interval_are_rejected() {
    let m = small_model();
    let q = tilted(&m, 0.5, false);
    let a = diag_element(&m, 0, 2.0);
    assert!(matches!(rc_candidate(&m, &q, &a, 1.5), Err(ProjError::Domain(_))));
    assert!(matches!(rc_candidate(&m, &q, &a, 0.0), Err(ProjError::Domain(_))));
}

#[test]
fn closed_candidate_attains_the_distance() {
    let m = small_model();
    let theta: f64 = std::f64::consts::FRAC_PI_4;
    let p = tilted(&m, theta, true);
    let eps = theta.cos().powi(2);
    let a = diag_element(&m, 0, 1.0);
    let cand = open_closed_candidate(&m, &p, &a, eps, CandidateMode::Closed, 0.0).unwrap();
    assert!(cand.compact_in_model);
    assert!(cand.idempotence_error <= 1e-9);
    assert!(cand.pqp_margin >= -1e-9);
    assert!(cand.distance <= theta.sin() + 1e-9);
    assert!((cand.bound - theta.sin()).abs() <= 1e-12);
}

#[test]
fn open_candidates_approach_the_closed_bound() {
    let m = small_model();
    let theta: f64 = 0.6;
    let p = tilted(&m, theta, true);
    let eps = theta.cos().powi(2);
    let a = diag_element(&m, 0, 1.0);
    let mut last = f64::INFINITY;
    for k in 3..=6 {
        let delta = 0.5f64.powi(k) * eps;
        let cand = open_closed_candidate(&m, &p, &a, eps, CandidateMode::Open, delta).unwrap();
        assert!((cand.eps_effective - (eps - 2.0 * delta)).abs() <= 1e-15);
        assert!(cand.bound < last);
        assert!(cand.bound > theta.sin());
        last = cand.bound;
    }
    let bad = open_closed_candidate(&m, &p, &a, eps, CandidateMode::Open, eps);
    assert!(matches!(bad, Err(ProjError::Domain(_))));
}

#[test]
fn elements_outside_the_unit_interval_are_refused() {
    let m = small_model();
    let p = tilted(&m, 0.5, true);
    let a = diag_element(&m, 0, 2.0);
    let res = open_closed_candidate(&m, &p, &a, 0.5, CandidateMode::Closed, 0.0);
    assert!(matches!(res, Err(ProjError::Domain(_))));
}
