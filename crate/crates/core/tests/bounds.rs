use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use proptest::prelude::*;

use projkit::bounds::{
    branch_threshold, closed_form, closed_form_i, closed_form_ii, closed_form_iia, closed_form_iib,
    disjoint_sum_bounds, maximin_cap_distance, maximin_numeric, maximin_recipe, max_gap, oracle_min,
    sharpness_witness, verify_grid, Branch, Case, GridSpec, MaximinBranch, OracleConfig,
};
use projkit::linalg::{c, C64};
use projkit::ProjError;

fn cos2(t: f64) -> f64 {
    t.cos().powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn case_i_with_one_trivial_angle(theta in 0.05f64..FRAC_PI_2, frac in 0.0f64..0.999) {
        let t1 = frac * theta;
        let cf = closed_form_i(theta, t1, 0.0).unwrap();
        let expected = (cos2(t1) - cos2(theta)) / theta.sin().powi(2);
        prop_assert!(!cf.out_of_domain);
        prop_assert!((cf.value - expected).abs() <= 1e-9, "{} vs {expected}", cf.value);
    }

    #[test]
    fn orthogonal_ranges_give_disjoint_sum_values(t1 in 0.0f64..1.5, t2 in 0.0f64..1.5) {
        let ii = closed_form_ii(FRAC_PI_2, t1, t2).unwrap();
        prop_assert!((ii.value - cos2(t1).min(cos2(t2))).abs() <= 1e-12);
        if t1 + t2 < FRAC_PI_2 {
            let i = closed_form_i(FRAC_PI_2, t1, t2).unwrap();
            let lower = disjoint_sum_bounds(1.0 / cos2(t1), 1.0 / cos2(t2), false).unwrap().inverse_lower;
            prop_assert!((i.value - lower).abs() <= 1e-12, "{} vs {lower}", i.value);
            prop_assert!((i.value - (cos2(t1) + cos2(t2) - 1.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn case_ii_branches_meet_at_the_threshold(t1 in 0.05f64..1.5, t2 in 0.05f64..1.5) {
        let theta = branch_threshold(t1, t2).acos();
        let a = closed_form_iia(theta, t1, t2);
        let b = closed_form_iib(theta, t1, t2);
        prop_assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }

    #[test]
    fn bounds_lie_in_the_unit_interval(theta in 0.05f64..FRAC_PI_2, t1 in 0.0f64..1.5, t2 in 0.0f64..1.5) {
        for case in [Case::I, Case::II] {
            let cf = closed_form(case, theta, t1, t2).unwrap();
            prop_assert!(cf.value >= -1e-12 && cf.value <= 1.0 + 1e-12, "{case:?}: {}", cf.value);
        }
    }

    #[test]
    fn maximin_search_matches_the_recipe(cval in 0.0f64..=1.0) {
        let (recipe, _) = maximin_recipe(cval);
        prop_assert!((maximin_numeric(cval) - recipe).abs() <= 1e-8);
    }
}

#[test]
fn case_i_without_tilt_is_one() {
    for &theta in &[0.3, 1.0, FRAC_PI_2] {
        let cf = closed_form_i(theta, 0.0, 0.0).unwrap();
        assert!((cf.value - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn case_i_outside_its_domain_is_flagged() {
    let cf = closed_form_i(0.5, 0.3, 0.3).unwrap();
    assert!(cf.out_of_domain);
    assert_eq!(cf.value, 0.0);
}

#[test]
fn case_ii_branch_choice_follows_the_threshold() {
    let (t1, t2) = (0.6, 0.9);
    let th = branch_threshold(t1, t2).acos();
    assert_eq!(closed_form_ii(th + 0.05, t1, t2).unwrap().branch, Branch::IIa);
    assert_eq!(closed_form_ii(th - 0.05, t1, t2).unwrap().branch, Branch::IIb);
}

#[test]
fn angles_outside_their_ranges_are_rejected() {
    assert!(matches!(closed_form_i(0.0, 0.1, 0.1), Err(ProjError::Domain(_))));
    assert!(matches!(closed_form_ii(1.0, FRAC_PI_2, 0.1), Err(ProjError::Domain(_))));
    assert!(matches!(closed_form_ii(1.0, -0.1, 0.1), Err(ProjError::Domain(_))));
}

#[test]
fn case_names_parse() {
    assert_eq!("I".parse::<Case>().unwrap(), Case::I);
    assert_eq!("ii".parse::<Case>().unwrap(), Case::II);
    assert_eq!("2".parse::<Case>().unwrap(), Case::II);
    assert!(matches!("III".parse::<Case>(), Err(ProjError::Param(_))));
}

#[test]
fn disjoint_sums() {
    let d = disjoint_sum_bounds(2.0, 2.0, true).unwrap();
    assert_eq!(d.inverse_lower, 0.0);
    assert_eq!(d.closed_value, Some(2.0));
    let d = disjoint_sum_bounds(1.0, 3.0, false).unwrap();
    assert!((d.inverse_lower - 1.0 / 3.0).abs() <= 1e-15);
    assert_eq!(d.closed_value, None);
    assert!(disjoint_sum_bounds(0.5, 2.0, false).is_err());
}

#[test]
fn maximin_boundary_values() {
    let axis = maximin_cap_distance(&[c(1.0), c(0.0), c(0.0)]).unwrap();
    assert!((axis.d_a - FRAC_PI_4).abs() <= 1e-10);
    assert_eq!(axis.branch, MaximinBranch::Axis);
    let half = maximin_cap_distance(&[c(FRAC_1_SQRT_2), C64::new(0.0, FRAC_1_SQRT_2), c(0.0)]).unwrap();
    assert!((half.dist - FRAC_1_SQRT_2).abs() <= 1e-10);
    let perp = maximin_cap_distance(&[c(0.0), c(0.6), c(0.8)]).unwrap();
    assert_eq!(perp.branch, MaximinBranch::Balanced);
    assert!((perp.dist - (2.0f64 / 3.0).sqrt()).abs() <= 1e-10);
}

#[test]
fn oracle_agrees_with_closed_forms_on_a_few_triples() {
    let cfg = OracleConfig::default();
    for &(case, th, a, b) in &[(Case::I, 1.2, 0.2, 0.4), (Case::II, 0.9, 0.5, 0.3), (Case::II, 1.4, 0.1, 1.0)] {
        let cf = closed_form(case, th, a, b).unwrap();
        let sol = oracle_min(case, th, a, b, &cfg).unwrap();
        assert!((cf.value - sol.value).abs() <= 1e-4, "{case:?} {th} {a} {b}: {} vs {}", cf.value, sol.value);
    }
}

#[test]
fn custom_grid_parses_and_verifies() {
    let g = GridSpec::parse("theta=1.0;t1=0.2;t2=0.1,0.3").unwrap();
    assert_eq!(g.triples().len(), 2);
    let rows = verify_grid(Case::I, &g, &OracleConfig::default()).unwrap();
    assert!(max_gap(&rows) <= 1e-4);
    assert!(GridSpec::parse("phi=1").is_err());
    assert!(GridSpec::parse("theta=x").is_err());
}

#[test]
fn sharpness_witness_meets_the_bound() {
    let cfg = OracleConfig::default();
    for &(case, th, a, b) in &[(Case::I, 0.8, 0.15, 0.3), (Case::II, 1.0, 0.4, 0.7)] {
        let w = sharpness_witness(case, th, a, b, 16, &cfg).unwrap();
        let cf = closed_form(case, th, a, b).unwrap().value;
        assert!((w.report.state_value - cf).abs() <= 1e-6, "{} vs {cf}", w.report.state_value);
        assert!(w.report.angle >= th - 1e-8);
    }
}
