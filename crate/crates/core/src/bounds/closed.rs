use serde::Serialize;

use crate::error::{ProjError, Result};

/// Smallest angle accepted for the join bounds.
pub const MIN_THETA: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    I,
    II,
}

impl std::str::FromStr for Case {
    type Err = ProjError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(Case::I),
            "II" | "ii" | "2" => Ok(Case::II),
            other => Err(ProjError::Param(format!("unknown case `{other}`, expected I or II"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    I,
    #[serde(rename = "II(a)")]
    IIa,
    #[serde(rename = "II(b)")]
    IIb,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::I => "I",
            Branch::IIa => "II(a)",
            Branch::IIb => "II(b)",
        })
    }
}

/// Lower bound on `alpha(p1 ∨ p2)^-1` with its branch and a flag for the degenerate
/// case-I domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub value: f64,
    pub branch: Branch,
    pub out_of_domain: bool,
}

fn check_angles(theta: f64, t1: f64, t2: f64) -> Result<()> {
    let half = std::f64::consts::FRAC_PI_2;
    if !(theta >= MIN_THETA && theta <= half + 1e-15) {
        return Err(ProjError::Domain(format!("theta = {theta} must lie in [{MIN_THETA}, pi/2]")));
    }
    for t in [t1, t2] {
        if !(t >= 0.0 && t < half) {
            return Err(ProjError::Domain(format!("theta_j = {t} must lie in [0, pi/2)")));
        }
    }
    Ok(())
}

/// Case I: `(S - sqrt T) / (2 sin^2 theta)`, evaluated as
/// `1 - (sin^2 theta_1 + sin^2 theta_2 + 2 cos theta sin theta_1 sin theta_2) / sin^2 theta`;
/// 0 with the out-of-domain flag when `theta_1 + theta_2 >= theta`.
pub fn closed_form_i(theta: f64, t1: f64, t2: f64) -> Result<ClosedForm> {
    check_angles(theta, t1, t2)?;
    if t1 + t2 >= theta {
        return Ok(ClosedForm { value: 0.0, branch: Branch::I, out_of_domain: true });
    }
    let ct = theta.cos();
    let (s1, s2) = (t1.sin(), t2.sin());
    // the radicand is the square of s1^2 + s2^2 + 2 ct s1 s2, so the difference simplifies
    let value = 1.0 - (s1 * s1 + s2 * s2 + 2.0 * ct * s1 * s2) / theta.sin().powi(2);
    Ok(ClosedForm { value, branch: Branch::I, out_of_domain: false })
}

/// `sin theta_1 sin theta_2 / (1 + cos theta_1 cos theta_2)`: case II uses branch (a) when
/// `cos theta` is at most this.
pub fn branch_threshold(t1: f64, t2: f64) -> f64 {
    t1.sin() * t2.sin() / (1.0 + t1.cos() * t2.cos())
}

pub fn closed_form_iia(theta: f64, t1: f64, t2: f64) -> f64 {
    let (ct, st) = (theta.cos(), theta.sin());
    let (c1, c2) = (t1.cos(), t2.cos());
    let (q1, q2) = (c1 * c1, c2 * c2);
    let sum = q1 + q2;
    let s = sum + 2.0 * ct * ct * c1 * c2;
    let d = c1 - c2;
    let root = (c1 + c2) * (d * d + 4.0 * c1 * c2 * ct * ct).sqrt();
    (s - root) / (2.0 * st * st)
}

pub fn closed_form_iib(theta: f64, t1: f64, t2: f64) -> f64 {
    let (ct, st) = (theta.cos(), theta.sin());
    let (c1, c2, s1, s2) = (t1.cos(), t2.cos(), t1.sin(), t2.sin());
    let (q1, q2) = (c1 * c1, c2 * c2);
    q1 * q2 * st * st / (q1 + q2 - q1 * q2 * (1.0 + ct * ct) + 2.0 * ct * c1 * c2 * s1 * s2)
}

/// Case II, branch chosen by [`branch_threshold`].
pub fn closed_form_ii(theta: f64, t1: f64, t2: f64) -> Result<ClosedForm> {
    check_angles(theta, t1, t2)?;
    if theta.cos() <= branch_threshold(t1, t2) {
        Ok(ClosedForm { value: closed_form_iia(theta, t1, t2), branch: Branch::IIa, out_of_domain: false })
    } else {
        Ok(ClosedForm { value: closed_form_iib(theta, t1, t2), branch: Branch::IIb, out_of_domain: false })
    }
}

pub fn closed_form(case: Case, theta: f64, t1: f64, t2: f64) -> Result<ClosedForm> {
    match case {
        Case::I => closed_form_i(theta, t1, t2),
        Case::II => closed_form_ii(theta, t1, t2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisjointSum {
    /// `max(0, 1/alpha_1 + 1/alpha_2 - 1)`, a lower bound on `alpha(p1 + p2)^-1`.
    pub inverse_lower: f64,
    /// `max(alpha_1, alpha_2)`, the exact value for closed summands.
    pub closed_value: Option<f64>,
}

/// Bounds for `alpha(p1 + p2)` with `p1 p2 = 0`; the exact value applies when the caller
/// asserts both summands are closed in a sigma-unital algebra.
pub fn disjoint_sum_bounds(a1: f64, a2: f64, closed: bool) -> Result<DisjointSum> {
    for a in [a1, a2] {
        if a.is_nan() || a < 1.0 {
            return Err(ProjError::Domain(format!("alpha = {a} must be at least 1")));
        }
    }
    let inverse_lower = (1.0 / a1 + 1.0 / a2 - 1.0).max(0.0);
    Ok(DisjointSum { inverse_lower, closed_value: closed.then(|| a1.max(a2)) })
}
