//! Tolerances and run configuration. Configuration files are flat TOML key-value text
//! whose keys mirror the command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ProjError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub tol_proj: f64,
    pub tol_rank: f64,
    pub tol_spec: f64,
    pub tol_angle_sq: f64,
    pub angle_cluster: f64,
    pub tol_psd: f64,
    pub tol_alpha: f64,
    pub eps_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_proj: 1e-8,
            tol_rank: 1e-8,
            tol_spec: 1e-10,
            tol_angle_sq: 1e-12,
            angle_cluster: 1e-8,
            tol_psd: 1e-9,
            tol_alpha: 1e-6,
            eps_floor: 0.02,
        }
    }
}

pub const DEFAULT_TRUNC: usize = 32;
pub const DEFAULT_FIBER_DIM: usize = 48;
pub const DEFAULT_BUDGET: usize = 4096;
pub const BUDGET_ENV: &str = "PROJKIT_BUDGET";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub trunc: usize,
    pub fiber_dim: usize,
    pub budget: usize,
    pub samples: usize,
    pub inner_grid: usize,
    pub outer_grid: usize,
    pub delta_grid: usize,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trunc: DEFAULT_TRUNC,
            fiber_dim: DEFAULT_FIBER_DIM,
            budget: budget_from_env(),
            samples: 2000,
            inner_grid: 2048,
            outer_grid: 512,
            delta_grid: 5,
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ProjError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| ProjError::Config(e.to_string()))
    }
}

/// Cap on total matrix dimension, read from `PROJKIT_BUDGET`.
pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}
