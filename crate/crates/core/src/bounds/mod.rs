//! Bounds on `alpha(p1 ∨ p2)` in terms of the angle between `p1, p2` and their own `alpha`
//! values: closed forms, a brute-force oracle for the underlying minimum problems, sharpness
//! witnesses in the sequence model, and the maximin distance to closed relatively compact
//! projections.

mod closed;
mod maximin;
mod oracle;
mod sharp;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

pub use closed::{
    branch_threshold, closed_form, closed_form_i, closed_form_ii, closed_form_iia, closed_form_iib, disjoint_sum_bounds,
    Branch, Case, ClosedForm, DisjointSum, MIN_THETA,
};
pub use maximin::{maximin_cap_distance, maximin_numeric, maximin_recipe, MaximinBranch, MaximinResult};
pub use oracle::{oracle_min, oracle_min_i, oracle_min_ii, OracleConfig, OracleSolution};
pub use sharp::{sharpness_witness, witness_model, InterleavedVariant, SharpnessReport, SharpnessWitness};

use crate::error::{ProjError, Result};

pub const DEFAULT_THETAS: [f64; 3] = [0.4, 0.8, 1.2];
pub const DEFAULT_SIDE_ANGLES: [f64; 3] = [0.0, 0.15, 0.3];

#[derive(Debug, Clone, Serialize)]
pub struct JoinBoundResult {
    pub case: Case,
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub closed_form: f64,
    pub oracle_min: f64,
    pub branch: Branch,
    pub gap: f64,
    pub out_of_domain: bool,
    /// Oracle resolution flag or a closed-form/oracle disagreement.
    pub flagged: bool,
    pub diagnostic: Option<String>,
    pub oracle: OracleSolution,
}

/// Parameter triples `(theta, theta_1, theta_2)` for a verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub thetas: Vec<f64>,
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            thetas: DEFAULT_THETAS.to_vec(),
            theta1: DEFAULT_SIDE_ANGLES.to_vec(),
            theta2: DEFAULT_SIDE_ANGLES.to_vec(),
        }
    }
}

impl GridSpec {
    /// `default`, or `theta=a,b;t1=c,d;t2=e` with unlisted axes taken from the default.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut g = GridSpec::default();
        if s.is_empty() || s == "default" {
            return Ok(g);
        }
        for part in s.split(';').filter(|p| !p.trim().is_empty()) {
            let (key, vals) = part
                .split_once('=')
                .ok_or_else(|| ProjError::Param(format!("grid entry `{part}` is not key=values")))?;
            let vals = vals
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| ProjError::Param(format!("grid value `{v}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            match key.trim() {
                "theta" => g.thetas = vals,
                "t1" | "theta1" => g.theta1 = vals,
                "t2" | "theta2" => g.theta2 = vals,
                other => return Err(ProjError::Param(format!("unknown grid axis `{other}`"))),
            }
        }
        Ok(g)
    }

    pub fn triples(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        for &th in &self.thetas {
            for &a in &self.theta1 {
                for &b in &self.theta2 {
                    out.push((th, a, b));
                }
            }
        }
        out
    }
}

/// Closed form against the oracle at one triple.
pub fn verify_triple(case: Case, theta: f64, t1: f64, t2: f64, cfg: &OracleConfig) -> Result<JoinBoundResult> {
    let cf = closed_form(case, theta, t1, t2)?;
    let sol = oracle_min(case, theta, t1, t2, cfg)?;
    let gap = (cf.value - sol.value).abs();
    let mismatch = !cf.out_of_domain && gap > cfg.tol;
    let diagnostic = if mismatch {
        Some(format!(
            "transcription diagnostic: case {case:?} at (theta, theta1, theta2) = ({theta}, {t1}, {t2}): closed form {} vs oracle {} (minimizer x = {}, y = {})",
            cf.value, sol.value, sol.x, sol.y
        ))
    } else if sol.flagged {
        Some(format!("oracle grid error estimate {} exceeds {}", sol.gap_estimate, cfg.tol))
    } else {
        None
    };
    Ok(JoinBoundResult {
        case,
        theta,
        theta1: t1,
        theta2: t2,
        closed_form: cf.value,
        oracle_min: sol.value,
        branch: cf.branch,
        gap,
        out_of_domain: cf.out_of_domain,
        flagged: mismatch || sol.flagged,
        diagnostic,
        oracle: sol,
    })
}

pub fn verify_grid(case: Case, grid: &GridSpec, cfg: &OracleConfig) -> Result<Vec<JoinBoundResult>> {
    grid.triples().into_par_iter().map(|(th, a, b)| verify_triple(case, th, a, b, cfg)).collect()
}

/// Largest gap over in-domain rows.
pub fn max_gap(rows: &[JoinBoundResult]) -> f64 {
    rows.iter().filter(|r| !r.out_of_domain).map(|r| r.gap).fold(0.0, f64::max)
}

pub fn write_csv<W: Write>(rows: &[JoinBoundResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "schema", "case", "theta", "theta1", "theta2", "closed_form", "oracle_min", "gap", "branch", "out_of_domain", "flagged",
    ])?;
    for r in rows {
        w.write_record([
            crate::report::SCHEMA_VERSION.to_string(),
            format!("{:?}", r.case),
            format!("{}", r.theta),
            format!("{}", r.theta1),
            format!("{}", r.theta2),
            format!("{:.12e}", r.closed_form),
            format!("{:.12e}", r.oracle_min),
            format!("{:.3e}", r.gap),
            r.branch.to_string(),
            r.out_of_domain.to_string(),
            r.flagged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
