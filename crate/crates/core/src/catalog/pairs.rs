//! Table of achievable pairs `(alpha(p), alpha(pbar))`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::examples::{ex_3_3, ex_3_4, ex_3_5, ex_3_6, ex_3_7, ex_3_8, ex_3_9, Built};
use super::report::{CONTAIN_TOL, MAX_WIDTH};
use crate::config::RunConfig;
use crate::error::{ProjError, Result};
use crate::report::inf_f64;
use crate::seqmodel::AlphaEstimate;

pub const DEFAULT_S: [f64; 4] = [1.0, 2.0, 4.0, f64::INFINITY];
pub const DEFAULT_T: [f64; 4] = [1.0, 2.0, 4.0, f64::INFINITY];

const CLASSES: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct PairCell {
    #[serde(with = "inf_f64")]
    pub s: f64,
    #[serde(with = "inf_f64")]
    pub t: f64,
    pub construction: Option<String>,
    pub alpha_p: Option<AlphaEstimate>,
    pub alpha_pbar: Option<AlphaEstimate>,
    pub pass: bool,
    pub flag: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairsTable {
    pub cells: Vec<PairCell>,
    pub pass: bool,
}

fn route(s: f64, t: f64, cfg: &RunConfig) -> Result<(&'static str, Built)> {
    let theta = |x: f64| (1.0 / x).sqrt().acos();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match (s, t) {
        (s, t) if s == 1.0 && t == 1.0 => Ok(("3.3", ex_3_3(cfg)?)),
        (s, t) if s.is_infinite() && t.is_infinite() => Ok(("3.4", ex_3_4(cfg)?)),
        (s, t) if s == 1.0 && t.is_infinite() => Ok(("3.7", ex_3_7(cfg, CLASSES, &mut rng)?)),
        (s, t) if s == 1.0 => Ok(("3.8", ex_3_8(cfg, t, CLASSES, &mut rng)?)),
        (s, t) if s == t => Ok(("3.5", ex_3_5(cfg, theta(s))?)),
        (s, t) if t.is_infinite() => Ok(("3.6", ex_3_6(cfg, theta(s), CLASSES)?)),
        (s, t) => Ok(("3.9", ex_3_9(cfg, s, t, CLASSES)?)),
    }
}

fn cell(s: f64, t: f64, cfg: &RunConfig) -> PairCell {
    let mut out = PairCell { s, t, construction: None, alpha_p: None, alpha_pbar: None, pass: true, flag: None };
    if !(s >= 1.0 && t >= 1.0) {
        out.pass = false;
        out.flag = Some("values below 1 are never alpha values".into());
        return out;
    }
    if s > t {
        out.flag = Some("not achievable: alpha(p) <= alpha(pbar) always".into());
        return out;
    }
    match route(s, t, cfg) {
        Ok((id, built)) => {
            let ok = |e: &AlphaEstimate, v: f64| e.contains(v, CONTAIN_TOL) && (v.is_infinite() || e.width() <= MAX_WIDTH);
            out.pass = ok(&built.alpha_p, s) && ok(&built.alpha_pbar, t);
            out.construction = Some(id.to_string());
            out.alpha_p = Some(built.alpha_p);
            out.alpha_pbar = Some(built.alpha_pbar);
        }
        Err(ProjError::Budget(msg)) => out.flag = Some(format!("budget exhausted: {msg}")),
        Err(e) => {
            out.pass = false;
            out.flag = Some(e.to_string());
        }
    }
    out
}

/// One cell per `(s, t)`; cells with `s <= t` are built with the matching construction.
pub fn achievable_pairs_table(s_values: &[f64], t_values: &[f64], cfg: &RunConfig) -> PairsTable {
    let grid: Vec<(f64, f64)> = s_values.iter().flat_map(|&s| t_values.iter().map(move |&t| (s, t))).collect();
    let cells: Vec<PairCell> = grid.par_iter().map(|&(s, t)| cell(s, t, cfg)).collect();
    let pass = cells.iter().all(|c| c.pass);
    PairsTable { cells, pass }
}
