use std::f64::consts::FRAC_PI_3;

use projkit::catalog::{
    achievable_pairs_table, attainment_probe, buildable_ids, d_a_triangle_suite, entry, entry_seed, lemma_2_5_suite,
    lemma_3_7_check, lemma_3_7_suite, lemma_4_12_check, maximin_suite, normalize_id, pair_distance_suite, run_example,
    spectral_inequality_suite, Params, ENTRIES,
};
use projkit::config::RunConfig;
use projkit::linalg::{c, C64};
use projkit::seqmodel::closure_alpha_bound;
use projkit::ProjError;

fn cfg() -> RunConfig {
    RunConfig::default()
}

fn measured_f64(v: &serde_json::Value) -> f64 {
    match v {
        serde_json::Value::String(s) if s == "inf" => f64::INFINITY,
        other => other.as_f64().expect("numeric measurement"),
    }
}

#[test]
fn ids_normalize() {
    assert_eq!(normalize_id("4.10(b)"), "4.10b");
    assert_eq!(normalize_id(" 4.10B "), "4.10b");
    assert_eq!(entry("7.2(a)").unwrap().id, "7.2a");
    assert!(matches!(entry("9.9"), Err(ProjError::UnknownId(_))));
}

#[test]
fn entries_are_unique_and_mostly_buildable() {
    let mut ids: Vec<&str> = ENTRIES.iter().map(|e| e.id).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), ENTRIES.len());
    let built = buildable_ids();
    assert_eq!(built.len() + 4, ENTRIES.len());
    for id in ["4.15a", "5.5", "6.3a", "7.2c"] {
        assert!(!built.contains(&id));
    }
}

#[test]
fn unbuildable_entries_say_why() {
    let err = run_example("5.5", &Params::new(), &cfg(), 0).unwrap_err();
    assert!(matches!(err, ProjError::Unsupported(_)));
}

#[test]
fn unknown_parameters_are_rejected() {
    let p = Params::new().with("phi", 1.0);
    assert!(matches!(run_example("3.5", &p, &cfg(), 0), Err(ProjError::Param(_))));
    let p = Params::parse_pairs(&["theta"]);
    assert!(p.is_err());
    let p = Params::parse_pairs(&["classes=2.5"]).unwrap();
    assert!(matches!(run_example("3.6", &p, &cfg(), 0), Err(ProjError::Param(_))));
}

#[test]
fn escaping_vector_entry_matches_sec_squared() {
    for theta in [0.4, FRAC_PI_3] {
        let p = Params::new().with("theta", theta);
        let rep = run_example("3.5", &p, &cfg(), 0).unwrap();
        assert!(rep.pass, "{:?}", rep.failed_checks());
        let inf = rep.check("rc_sweep_infimum").unwrap();
        assert!((measured_f64(&inf.measured) - theta.sin()).abs() <= 0.02);
    }
}

#[test]
fn unit_entries_give_the_trivial_pairs() {
    for id in ["3.3", "3.4", "3.1", "3.2"] {
        let rep = run_example(id, &Params::new(), &cfg(), 0).unwrap();
        assert!(rep.pass, "{id}: {:?}", rep.failed_checks());
    }
}

#[test]
fn closed_and_open_pair_at_distance_root_half() {
    let rep = run_example("5.2", &Params::new(), &cfg(), 0).unwrap();
    assert!(rep.pass);
    let d = measured_f64(&rep.check("|p - q|").unwrap().measured);
    assert!((d - 0.5f64.sqrt()).abs() <= 1e-12);
}

#[test]
fn closure_formula_entry_reproduces_t() {
    for (sv, tv) in [(2.0, 4.0), (3.0, 9.0), (1.5, 2.0)] {
        let rep = run_example("4.13c", &Params::new().with("s", sv).with("t", tv), &cfg(), 0).unwrap();
        assert!(rep.pass, "({sv}, {tv}): {:?}", rep.failed_checks());
    }
    assert!(run_example("4.13c", &Params::new().with("s", 4.0).with("t", 2.0), &cfg(), 0).is_err());
    // K^2 = 3/2 at s = 2 gives 2 / (2 - 3/2)
    assert!((closure_alpha_bound(2.0, 1.5f64.sqrt()).unwrap() - 4.0).abs() <= 1e-12);
    assert!(closure_alpha_bound(2.0, 2.0f64.sqrt()).is_err());
}

#[test]
fn spectral_bound_entry() {
    let rep = run_example("8.5", &Params::new(), &cfg(), 0).unwrap();
    assert!(rep.pass, "{:?}", rep.failed_checks());
}

#[test]
fn extremal_vector_under_a_diagonal_majorant() {
    let r = lemma_3_7_check(2.0, 0.5).unwrap();
    assert!((r.u1_sq - 2.0 / 3.0).abs() <= 1e-15);
    assert!((r.u2_sq - 1.0 / 3.0).abs() <= 1e-15);
    assert!(r.pass);
    assert!(lemma_3_7_check(0.5, 0.5).is_err());
}

#[test]
fn two_point_decomposition_residual() {
    let u = [C64::new(0.3, 0.2), c(0.4), C64::new(0.0, -0.3)];
    assert!(lemma_4_12_check(0.6, &u).unwrap() <= 1e-12);
    assert!(lemma_4_12_check(0.1, &u).is_err());
}

#[test]
fn property_suites_have_no_failures() {
    let suites = [
        lemma_2_5_suite(200, 11).unwrap(),
        lemma_3_7_suite(200, 12).unwrap(),
        spectral_inequality_suite(200, 13).unwrap(),
        pair_distance_suite(200, 14).unwrap(),
        d_a_triangle_suite(200, 15).unwrap(),
    ];
    for s in &suites {
        assert_eq!(s.failures, 0, "{}: max violation {}", s.name, s.max_violation);
        assert!(s.trials >= 200, "{}: {} checks", s.name, s.trials);
    }
}

#[test]
fn maximin_samples_match_the_recipe() {
    let m = maximin_suite(20, 5).unwrap();
    assert!(m.pass);
    assert!(m.max_diff <= 1e-8);
    assert!((m.boundary_zero - (2.0f64 / 3.0).sqrt()).abs() <= 1e-10);
    assert!((m.boundary_axis - 0.5f64.sqrt()).abs() <= 1e-10);
}

#[test]
fn pairs_table_flags_impossible_cells() {
    let t = achievable_pairs_table(&[1.0, 2.0], &[1.0, 2.0], &cfg());
    assert_eq!(t.cells.len(), 4);
    assert!(t.pass);
    let bad = t.cells.iter().find(|c| c.s == 2.0 && c.t == 1.0).unwrap();
    assert!(bad.flag.is_some());
    assert!(bad.construction.is_none());
    let diag = t.cells.iter().find(|c| c.s == 2.0 && c.t == 2.0).unwrap();
    assert_eq!(diag.construction.as_deref(), Some("3.5"));
    let below = achievable_pairs_table(&[0.5], &[1.0], &cfg());
    assert!(!below.pass);
}

#[test]
fn attainment_probes_pass() {
    for id in ["7.2b", "compact"] {
        let r = attainment_probe(id, &cfg()).unwrap();
        assert!(r.pass, "{id}: {:?}", r.steps);
    }
    assert!(attainment_probe("nope", &cfg()).is_err());
}

#[test]
fn entry_seeds_are_distinct_and_stable() {
    assert_eq!(entry_seed(7, 3), 7 * 1_000_003 + 3);
    assert_ne!(entry_seed(7, 3), entry_seed(7, 4));
    assert_ne!(entry_seed(7, 3), entry_seed(8, 3));
}
