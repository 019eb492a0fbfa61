use proptest::prelude::*;

use projkit::linalg::{c, CMat};
use projkit::seqmodel::{
    alpha_sandwich, alpha_state_limit, compression_floor, ModelSpec, SeqElement, SeqModel, SeqProjection, TailKind,
    Witness,
};
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

fn diag_core(m: &SeqModel, entries: &[(usize, f64)]) -> CMat {
    let mut x = CMat::zeros(m.core_dim(), m.core_dim());
    for &(i, v) in entries {
        x[(i, i)] = c(v);
    }
    x
}

/// Tail of unit vectors `cos(theta) e_0 + sin(theta) f_n` with `f_n` escaping; no limit part.
fn tilted(m: &SeqModel, theta: f64) -> SeqProjection {
    let v = column(m.ghost_dim(), &[(0, theta.cos()), (m.escape_index(0, 0), theta.sin())]);
    SeqProjection::structured(m, vec![v], CMat::zeros(m.fiber_space_dim(), 0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closure_is_idempotent_and_above(theta in 0.05f64..1.5) {
        let m = small_model();
        let q = tilted(&m, theta);
        let qbar = q.closure(&m).unwrap();
        let again = qbar.closure(&m).unwrap();
        prop_assert!(again.norm_distance(&qbar, &m).unwrap() <= 1e-12);
        prop_assert!(qbar.is_closed(&m).unwrap());
        let joined = q.join(&qbar, &m).unwrap();
        prop_assert!(joined.norm_distance(&qbar, &m).unwrap() <= 1e-10);
    }

    #[test]
    fn closure_is_monotone(theta in 0.05f64..1.5) {
        let m = small_model();
        let q = tilted(&m, theta);
        let extra = column(m.fiber_space_dim(), &[(1, 1.0)]);
        let v = column(m.ghost_dim(), &[(0, theta.cos()), (m.escape_index(0, 0), theta.sin())]);
        let bigger = SeqProjection::structured(&m, vec![v], extra).unwrap();
        prop_assert!(q.join(&bigger, &m).unwrap().norm_distance(&bigger, &m).unwrap() <= 1e-10);
        let (qb, bb) = (q.closure(&m).unwrap(), bigger.closure(&m).unwrap());
        prop_assert!(qb.join(&bb, &m).unwrap().norm_distance(&bb, &m).unwrap() <= 1e-10);
    }

    #[test]
    fn alpha_of_tilted_tail_is_sec_squared(theta in 0.05f64..1.4) {
        let m = small_model();
        let q = tilted(&m, theta);
        let s = 1.0 / theta.cos().powi(2);
        let w = Witness::Compress(SeqElement::constant(&m, diag_core(&m, &[(0, s)])).unwrap());
        let est = alpha_sandwich(&m, &q, Some(&w)).unwrap();
        prop_assert!(est.contains(s, 1e-6), "{:?} vs {s}", (est.lower, est.upper));
        prop_assert!(est.width() <= 1e-6);
        let state = alpha_state_limit(&m, &q).unwrap();
        prop_assert!((state.norm - theta.cos().powi(2)).abs() <= 1e-12);
    }

    #[test]
    fn alpha_does_not_exceed_alpha_of_closure(theta in 0.05f64..1.4) {
        let m = small_model();
        let q = tilted(&m, theta);
        let qbar = q.closure(&m).unwrap();
        let s = 1.0 / theta.cos().powi(2);
        let w = Witness::Compress(SeqElement::constant(&m, diag_core(&m, &[(0, s)])).unwrap());
        let a = alpha_sandwich(&m, &q, Some(&w)).unwrap();
        let b = alpha_sandwich(&m, &qbar, Some(&w)).unwrap();
        prop_assert!(a.lower <= b.upper + 1e-9);
    }
}

#[test]
fn compression_floor_of_the_scaled_witness_is_one() {
    let m = small_model();
    let theta: f64 = 0.7;
    let q = tilted(&m, theta);
    let s = 1.0 / theta.cos().powi(2);
    let a = SeqElement::constant(&m, diag_core(&m, &[(0, s)])).unwrap();
    let (floor, _) = compression_floor(&m, &q, &a).unwrap();
    assert!((floor - 1.0).abs() <= 1e-12);
}

#[test]
fn too_weak_a_witness_is_rejected() {
    let m = small_model();
    let q = tilted(&m, 0.7);
    let a = SeqElement::constant(&m, diag_core(&m, &[(0, 1.0)])).unwrap();
    let err = alpha_sandwich(&m, &q, Some(&Witness::Compress(a))).unwrap_err();
    assert!(matches!(err, ProjError::WitnessRejected { .. }), "{err}");
}

#[test]
fn a_tail_on_fixed_axes_is_closed() {
    let m = small_model();
    let v = column(m.ghost_dim(), &[(0, 1.0)]);
    let lim = column(m.fiber_space_dim(), &[(0, 1.0)]);
    let p = SeqProjection::structured(&m, vec![v], lim).unwrap();
    assert!(p.is_closed(&m).unwrap());
    assert!(!tilted(&m, 0.3).is_closed(&m).unwrap());
}

#[test]
fn diagonal_limit_models_do_not_decide_closures() {
    let m = SeqModel::new(&ModelSpec {
        fiber_dim: 24,
        trunc_len: 8,
        tail_kind: TailKind::DiagonalLimit,
        far_dim: 1,
        ..Default::default()
    })
    .unwrap();
    let q = tilted(&m, 0.3);
    assert!(matches!(q.closure(&m), Err(ProjError::ClosureUndecidable(_))));
}

#[test]
fn elements_are_eventually_constant() {
    let m = small_model();
    let x = diag_core(&m, &[(0, 2.0), (1, -1.0)]);
    let a = SeqElement::constant(&m, x.clone()).unwrap();
    assert!(a.is_self_adjoint(1e-12));
    for n in 1..=m.trunc_len {
        assert_eq!(a.fiber_core(n), x);
    }
    assert_eq!(a.scale(0.5).fiber_core(3), x.map(|z| z * 0.5));
}
