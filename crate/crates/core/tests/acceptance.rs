//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::time::{Duration, Instant};

use projkit::bounds::{
    branch_threshold, closed_form, closed_form_i, closed_form_ii, closed_form_iia, closed_form_iib,
    maximin_cap_distance, max_gap, sharpness_witness, verify_grid, Case, GridSpec, OracleConfig,
};
use projkit::catalog::{maximin_suite, run_example, suite_all, ExampleReport, Params, SuiteEntry};
use projkit::config::RunConfig;
use projkit::linalg::{c, C64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn measured(rep: &ExampleReport, check: &str) -> Option<f64> {
    let v = &rep.check(check)?.measured;
    match v.as_str() {
        Some("inf") => Some(f64::INFINITY),
        _ => v.as_f64(),
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn distance_formula(cfg: &RunConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
        let start = Instant::now();
        let rep = match run_example("3.5", &Params::new().with("theta", theta), cfg, cfg.seed) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("theta = {theta}: {e}")),
        };
        slowest = slowest.max(secs(start.elapsed()));
        let alpha = 1.0 / theta.cos().powi(2);
        let predicted = (1.0 - 1.0 / alpha).sqrt();
        let Some(inf) = measured(&rep, "rc_sweep_infimum") else {
            return outcome(false, "no sweep infimum in the report");
        };
        worst = worst.max((inf - predicted).abs());
    }
    outcome(worst <= 0.02 && slowest < 10.0, format!("max |inf - sqrt(1 - 1/alpha)| = {worst:.2e}, slowest {slowest:.2}s"))
}

fn oracle_agreement(cfg: &RunConfig) -> Outcome {
    let ocfg = OracleConfig::from(cfg);
    let mut parts = Vec::new();
    let mut pass = true;
    for case in [Case::I, Case::II] {
        let start = Instant::now();
        let rows = match verify_grid(case, &GridSpec::default(), &ocfg) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("case {case:?}: {e}")),
        };
        let t = secs(start.elapsed());
        let gap = max_gap(&rows);
        for r in rows.iter().filter(|r| r.gap > 1e-4 && !r.out_of_domain) {
            if let Some(d) = &r.diagnostic {
                eprintln!("  {d}");
            }
        }
        pass &= rows.len() == 27 && gap <= 1e-4 && t < 60.0;
        parts.push(format!("case {case:?}: {} rows, max gap {gap:.2e}, {t:.2}s", rows.len()));
    }
    outcome(pass, parts.join("; "))
}

fn specializations() -> Outcome {
    let grid: Vec<f64> = (0..15).map(|k| 0.1 * k as f64).collect();
    let mut worst_half: f64 = 0.0;
    let mut worst_branch: f64 = 0.0;
    for &t1 in &grid {
        for &t2 in &grid {
            let (c1, c2) = (t1.cos().powi(2), t2.cos().powi(2));
            let ii = closed_form_ii(FRAC_PI_2, t1, t2).map(|f| f.value).unwrap_or(f64::NAN);
            worst_half = worst_half.max((ii - c1.min(c2)).abs());
            if t1 + t2 < FRAC_PI_2 {
                let i = closed_form_i(FRAC_PI_2, t1, t2).map(|f| f.value).unwrap_or(f64::NAN);
                worst_half = worst_half.max((i - (c1 + c2 - 1.0).max(0.0)).abs());
            }
            if t1 > 0.0 && t2 > 0.0 {
                let th = branch_threshold(t1, t2).acos();
                worst_branch = worst_branch.max((closed_form_iia(th, t1, t2) - closed_form_iib(th, t1, t2)).abs());
            }
        }
    }
    let pass = worst_half <= 1e-12 && worst_branch <= 1e-8;
    outcome(pass, format!("orthogonal-range error {worst_half:.2e}, branch jump {worst_branch:.2e}"))
}

fn sharpness(cfg: &RunConfig) -> Outcome {
    let ocfg = OracleConfig::from(cfg);
    let triples = [
        (Case::I, [0.8, 1.1, 1.4], [(0.1, 0.2), (0.2, 0.3), (0.05, 0.4)]),
        (Case::II, [0.6, 1.0, 1.4], [(0.3, 0.5), (0.7, 0.2), (1.0, 1.2)]),
    ];
    let mut count = 0;
    let mut worst_value: f64 = 0.0;
    let mut worst_angle: f64 = f64::INFINITY;
    for (case, thetas, pairs) in triples {
        for th in thetas {
            for (a, b) in pairs {
                let cf = match closed_form(case, th, a, b) {
                    Ok(cf) if !cf.out_of_domain => cf.value,
                    _ => return outcome(false, format!("({th}, {a}, {b}) is not in the domain of case {case:?}")),
                };
                let w = match sharpness_witness(case, th, a, b, cfg.trunc, &ocfg) {
                    Ok(w) => w,
                    Err(e) => return outcome(false, format!("case {case:?} at ({th}, {a}, {b}): {e}")),
                };
                worst_value = worst_value.max((w.report.state_value - cf).abs());
                worst_angle = worst_angle.min(w.report.angle - th);
                count += 1;
            }
        }
    }
    let pass = count == 18 && worst_value <= 1e-6 && worst_angle >= -1e-8;
    outcome(pass, format!("{count} triples, max value gap {worst_value:.2e}, min angle margin {worst_angle:.2e}"))
}

fn catalog_and_properties(cfg: &RunConfig) -> (Outcome, Outcome) {
    let start = Instant::now();
    let rep = match suite_all(cfg) {
        Ok(r) => r,
        Err(e) => {
            let msg = format!("suite failed: {e}");
            return (outcome(false, msg.clone()), outcome(false, msg));
        }
    };
    let t = secs(start.elapsed());
    let mut ran = 0;
    let mut failed = Vec::new();
    for e in &rep.examples {
        match e {
            SuiteEntry::Ran(r) => {
                ran += 1;
                if !r.pass {
                    failed.push(r.id.clone());
                }
            }
            SuiteEntry::Error { id, error } => failed.push(format!("{id} ({error})")),
            SuiteEntry::NotBuildable { .. } => {}
        }
    }
    let catalog = outcome(
        failed.is_empty() && t < 300.0,
        if failed.is_empty() {
            format!("{ran} entries pass, suite {t:.1}s")
        } else {
            format!("failing: {}", failed.join(", "))
        },
    );
    let expected = [1000, 500, 500, 1000, 1000];
    let mut pass = rep.properties.len() == expected.len();
    let mut parts = Vec::new();
    for (s, n) in rep.properties.iter().zip(expected) {
        pass &= s.failures == 0 && s.trials >= n;
        parts.push(format!("{} {}/{}", s.name, s.trials - s.failures, s.trials));
    }
    (catalog, outcome(pass, parts.join(", ")))
}

fn regularity(cfg: &RunConfig) -> Outcome {
    let run = |id: &str, p: Params| run_example(id, &p, cfg, cfg.seed);
    let mut notes = Vec::new();
    let mut pass = true;

    let theta = FRAC_PI_4;
    let s = 1.0 / theta.cos().powi(2);
    match run("4.10b", Params::new().with("theta", theta)) {
        Ok(r) => {
            let k = measured(&r, "quasi-regularity constant").unwrap_or(f64::NAN);
            pass &= k >= s.sqrt() - 0.02 && k <= s.sqrt() + 1e-6;
            notes.push(format!("4.10(b) K = {k:.6}"));
        }
        Err(e) => return outcome(false, format!("4.10b: {e}")),
    }
    match run("4.10d", Params::new()) {
        Ok(r) => {
            let k = measured(&r, "quasi-regularity constant").unwrap_or(f64::NAN);
            let found = r.check("0-regularity counterexample found").map(|c| c.pass).unwrap_or(false);
            pass &= k >= 2f64.sqrt() - 0.02 && k <= 2f64.sqrt() + 1e-6 && found;
            notes.push(format!("4.10(d) K = {k:.6}, counterexample {found}"));
        }
        Err(e) => return outcome(false, format!("4.10d: {e}")),
    }
    let s = 2.0;
    match run("4.13a", Params::new().with("s", s)) {
        Ok(r) => {
            let k = measured(&r, "quasi-regularity constant").unwrap_or(f64::NAN);
            pass &= (k - (s / (s - 1.0)).sqrt()).abs() <= 0.02;
            notes.push(format!("4.13(a) K = {k:.6}"));
        }
        Err(e) => return outcome(false, format!("4.13a: {e}")),
    }
    let mut worst: f64 = 0.0;
    for (s, t) in [(2.0, 4.0), (1.5, 3.0), (3.0, 10.0)] {
        match run("4.13c", Params::new().with("s", s).with("t", t)) {
            Ok(r) => worst = worst.max((measured(&r, "closure bound").unwrap_or(f64::NAN) - t).abs() / t),
            Err(e) => return outcome(false, format!("4.13c: {e}")),
        }
    }
    pass &= worst <= 1e-12;
    notes.push(format!("4.13(c) relative error {worst:.1e}"));
    outcome(pass, notes.join(", "))
}

fn maximin(cfg: &RunConfig) -> Outcome {
    let m = match maximin_suite(50, cfg.seed) {
        Ok(m) => m,
        Err(e) => return outcome(false, e.to_string()),
    };
    let perp = maximin_cap_distance(&[c(0.0), c(0.6), C64::new(0.0, 0.8)]).map(|r| r.dist).unwrap_or(f64::NAN);
    let near = maximin_cap_distance(&[c(0.8), c(0.6), c(0.0)]).map(|r| r.dist).unwrap_or(f64::NAN);
    let edge = maximin_cap_distance(&[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).map(|r| r.dist).unwrap_or(f64::NAN);
    let zero_err = (perp - (2.0f64 / 3.0).sqrt()).abs().max((m.boundary_zero - (2.0f64 / 3.0).sqrt()).abs());
    let axis_err = (near - FRAC_1_SQRT_2).abs().max((edge - FRAC_1_SQRT_2).abs()).max((m.boundary_axis - FRAC_1_SQRT_2).abs());
    let pass = m.samples == 50 && m.max_diff <= 1e-8 && zero_err <= 1e-10 && axis_err <= 1e-10;
    outcome(
        pass,
        format!("{} samples, max diff {:.1e}, boundary errors {zero_err:.1e} and {axis_err:.1e}", m.samples, m.max_diff),
    )
}

fn determinism() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut bytes = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let code = projkit::cli::run(["projkit", "--seed", "7", "suite", "all", "--json", path.to_str().unwrap()]);
        if code != projkit::cli::EXIT_PASS {
            return outcome(false, format!("suite all exited with {code}"));
        }
        bytes.push(std::fs::read(&path).unwrap_or_default());
    }
    let same = !bytes[0].is_empty() && bytes[0] == bytes[1];
    outcome(same, format!("two runs with seed 7, {} bytes, identical: {same}", bytes[0].len()))
}

fn main() {
    let cfg = RunConfig::default();
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut timed = |n: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let t = secs(start.elapsed());
        println!("[{}] {n}. {name}: {} ({t:.1}s)", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o, t));
    };
    timed(1, "distance formula", &mut || distance_formula(&cfg));
    timed(2, "oracle agreement", &mut || oracle_agreement(&cfg));
    timed(3, "exact specializations", &mut specializations);
    timed(4, "sharpness witnesses", &mut || sharpness(&cfg));
    let mut props = None;
    timed(5, "catalog regression", &mut || {
        let (a, b) = catalog_and_properties(&cfg);
        props = Some(b);
        a
    });
    timed(6, "property suites", &mut || props.take().unwrap_or_else(|| outcome(false, "suite did not run")));
    timed(7, "regularity numerics", &mut || regularity(&cfg));
    timed(8, "maximin", &mut || maximin(&cfg));
    timed(9, "determinism", &mut determinism);
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
