use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::{budget_from_env, Tolerances};
use crate::error::{ProjError, Result};
use crate::linalg::{c, CMat, FinProjection};

/// Location of a fiber inside a model: an explicit index `1..=N`, the norm-limit fiber,
/// a tail class evaluated beyond the truncation, the escaping complement, or the scalar
/// summand of an extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberId {
    Explicit(usize),
    Limit,
    Tail(usize),
    Complement,
    Scalar,
}

impl fmt::Display for FiberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberId::Explicit(n) => write!(f, "n={n}"),
            FiberId::Limit => write!(f, "n=inf"),
            FiberId::Tail(k) => write!(f, "tail class {k}"),
            FiberId::Complement => write!(f, "escaping complement"),
            FiberId::Scalar => write!(f, "scalar summand"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    NormLimit,
    DiagonalLimit,
}

/// Scalar extension of a doubled model, fixed by a projection `e'` on the two components.
#[derive(Debug, Clone, PartialEq)]
pub struct BusbyExtension {
    e_prime: FinProjection,
}

impl BusbyExtension {
    pub fn new(e_prime: FinProjection) -> Result<Self> {
        if e_prime.dim() != 2 {
            return Err(ProjError::InvalidModel(format!("e' must act on 2 components, got {}", e_prime.dim())));
        }
        Ok(BusbyExtension { e_prime })
    }

    /// `[[1/t, b], [b, 1 - 1/t]]` with `b = sqrt(t^-1 (1 - t^-1))`.
    pub fn from_t(t: f64) -> Result<Self> {
        if !(t >= 1.0 && t.is_finite()) {
            return Err(ProjError::Param(format!("extension parameter t = {t} must be finite and >= 1")));
        }
        let ti = 1.0 / t;
        let b = (ti * (1.0 - ti)).sqrt();
        let m = CMat::from_row_slice(2, 2, &[c(ti), c(b), c(b), c(1.0 - ti)]);
        Self::new(FinProjection::with_tol(m, 1e-12)?)
    }

    pub fn e_prime(&self) -> &FinProjection {
        &self.e_prime
    }
}

/// Parameters of a truncated sequence model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelSpec {
    pub fiber_dim: usize,
    pub trunc_len: usize,
    pub tail_kind: TailKind,
    /// Base vectors of tail families live in the first `block` coordinates.
    pub block: usize,
    /// Coordinates beyond the truncation that stay fixed along the sequence.
    pub far_dim: usize,
    /// Number of weakly null escape labels carried by tail classes.
    pub escape_dim: usize,
    /// Number of matrix components (2 for a doubled algebra).
    pub comps: usize,
    /// `t` of the extension projection, if the model is a scalar extension.
    pub extension_t: Option<f64>,
    pub budget: usize,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec {
            fiber_dim: crate::config::DEFAULT_FIBER_DIM,
            trunc_len: crate::config::DEFAULT_TRUNC,
            tail_kind: TailKind::NormLimit,
            block: 4,
            far_dim: 0,
            escape_dim: 1,
            comps: 1,
            extension_t: None,
            budget: budget_from_env(),
        }
    }
}

/// Finite model of `c ⊗ K` and its variants.
///
/// Fibers `n <= N` are matrices on `comps` copies of `C^d ⊕ C^F`. Elements are eventually
/// constant: fibers beyond `N` equal the limit `x_inf`, and they vanish on the far axes.
/// A projection's fibers beyond `N` are described by tail classes living in a ghost space
/// `comps` copies of `C^d ⊕ C^F ⊕ C^L`; the `L` escape labels stand for orthonormal
/// directions that drift off to infinity, so every element acts on them as zero (plus the
/// extension term).
#[derive(Debug, Clone)]
pub struct SeqModel {
    pub fiber_dim: usize,
    pub trunc_len: usize,
    pub tail_kind: TailKind,
    pub block: usize,
    pub far_dim: usize,
    pub escape_dim: usize,
    pub comps: usize,
    pub extension: Option<BusbyExtension>,
    pub tol: Tolerances,
    pub budget: usize,
}

impl SeqModel {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        let extension = match spec.extension_t {
            Some(t) => Some(BusbyExtension::from_t(t)?),
            None => None,
        };
        let m = SeqModel {
            fiber_dim: spec.fiber_dim,
            trunc_len: spec.trunc_len,
            tail_kind: spec.tail_kind,
            block: spec.block,
            far_dim: spec.far_dim,
            escape_dim: spec.escape_dim,
            comps: spec.comps,
            extension,
            tol: Tolerances::default(),
            budget: spec.budget,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ProjError::InvalidModel(msg));
        if self.fiber_dim == 0 || self.comps == 0 {
            return bad("fiber_dim and comps must be positive".into());
        }
        if self.trunc_len < 8 {
            return bad(format!("trunc_len {} < 8", self.trunc_len));
        }
        if self.block > self.fiber_dim {
            return bad(format!("block {} exceeds fiber_dim {}", self.block, self.fiber_dim));
        }
        if self.escape_dim > 0 {
            if self.fiber_dim < self.trunc_len + 4 {
                return bad(format!(
                    "fiber_dim {} < trunc_len + 4 = {}",
                    self.fiber_dim,
                    self.trunc_len + 4
                ));
            }
            if self.fiber_dim - self.block < self.escape_dim {
                return bad(format!(
                    "{} escape labels do not fit in the {} coordinates above the base block",
                    self.escape_dim,
                    self.fiber_dim - self.block
                ));
            }
        }
        if self.extension.is_some() && self.comps != 2 {
            return bad(format!("an extension needs 2 components, got {}", self.comps));
        }
        if self.ghost_dim() > self.budget {
            return Err(ProjError::Budget(format!("ghost dimension {} exceeds budget {}", self.ghost_dim(), self.budget)));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// Dimension of element fibers: `comps * d`.
    pub fn core_dim(&self) -> usize {
        self.comps * self.fiber_dim
    }

    /// Dimension of projection fibers `n <= N` and `n = inf`: `comps * (d + F)`.
    pub fn fiber_space_dim(&self) -> usize {
        self.comps * (self.fiber_dim + self.far_dim)
    }

    pub fn ghost_dim(&self) -> usize {
        self.comps * self.ghost_comp_dim()
    }

    pub fn ghost_comp_dim(&self) -> usize {
        self.fiber_dim + self.far_dim + self.escape_dim
    }

    pub fn fiber_comp_dim(&self) -> usize {
        self.fiber_dim + self.far_dim
    }

    /// Ghost index of escape label `l` in component `comp`.
    pub fn escape_index(&self, comp: usize, l: usize) -> usize {
        comp * self.ghost_comp_dim() + self.fiber_dim + self.far_dim + l
    }

    /// Ghost index of far axis `f` in component `comp`.
    pub fn far_index(&self, comp: usize, f: usize) -> usize {
        comp * self.ghost_comp_dim() + self.fiber_dim + f
    }

    /// Ghost index of truncated coordinate `i` in component `comp`.
    pub fn ghost_index(&self, comp: usize, i: usize) -> usize {
        comp * self.ghost_comp_dim() + i
    }

    pub fn fiber_index(&self, comp: usize, i: usize) -> usize {
        comp * self.fiber_comp_dim() + i
    }

    /// Coordinate that realizes escape label `l` at explicit fiber `n`; allocated from the
    /// top of the fiber downward and cycling through the coordinates above the base block.
    pub fn escape_axis(&self, n: usize, l: usize) -> usize {
        let room = self.fiber_dim - self.block;
        self.fiber_dim - 1 - (((n - 1) * self.escape_dim + l) % room)
    }

    /// Realizes ghost vectors (columns) at explicit fiber `n`.
    pub fn realize(&self, n: usize, ghost: &CMat) -> CMat {
        let (g, fd) = (self.ghost_comp_dim(), self.fiber_comp_dim());
        let mut out = CMat::zeros(self.fiber_space_dim(), ghost.ncols());
        for comp in 0..self.comps {
            for i in 0..g {
                let row = if i < fd {
                    comp * fd + i
                } else {
                    comp * fd + self.escape_axis(n, i - fd)
                };
                for k in 0..ghost.ncols() {
                    out[(row, k)] += ghost[(comp * g + i, k)];
                }
            }
        }
        out
    }

    /// Truncated and far part of ghost vectors, as fiber-space vectors (the weak limit of
    /// their realizations).
    pub fn weak_limit(&self, ghost: &CMat) -> CMat {
        let (g, fd) = (self.ghost_comp_dim(), self.fiber_comp_dim());
        CMat::from_fn(self.fiber_space_dim(), ghost.ncols(), |r, k| {
            let (comp, i) = (r / fd, r % fd);
            ghost[(comp * g + i, k)]
        })
    }

    /// Fiber-space vectors placed in the ghost space (no escape part).
    pub fn lift(&self, fiber: &CMat) -> CMat {
        let (g, fd) = (self.ghost_comp_dim(), self.fiber_comp_dim());
        let mut out = CMat::zeros(self.ghost_dim(), fiber.ncols());
        for comp in 0..self.comps {
            for i in 0..fd {
                for k in 0..fiber.ncols() {
                    out[(comp * g + i, k)] = fiber[(comp * fd + i, k)];
                }
            }
        }
        out
    }

    /// Element core (`comps * d` square) placed in fiber space, zero on far axes.
    pub fn embed_fiber(&self, x: &CMat) -> CMat {
        self.embed_with_stride(x, self.fiber_comp_dim(), self.fiber_space_dim())
    }

    /// Core-coordinate columns placed in fiber space.
    pub fn embed_fiber_cols(&self, x: &CMat) -> CMat {
        let (d, fd) = (self.fiber_dim, self.fiber_comp_dim());
        let mut out = CMat::zeros(self.fiber_space_dim(), x.ncols());
        for comp in 0..self.comps {
            for i in 0..d {
                for k in 0..x.ncols() {
                    out[(comp * fd + i, k)] = x[(comp * d + i, k)];
                }
            }
        }
        out
    }

    /// Element core placed in ghost space, zero on far axes and escape labels.
    pub fn embed_ghost(&self, x: &CMat) -> CMat {
        self.embed_with_stride(x, self.ghost_comp_dim(), self.ghost_dim())
    }

    fn embed_with_stride(&self, x: &CMat, stride: usize, size: usize) -> CMat {
        let d = self.fiber_dim;
        let mut out = CMat::zeros(size, size);
        for ca in 0..self.comps {
            for cb in 0..self.comps {
                for i in 0..d {
                    for j in 0..d {
                        out[(ca * stride + i, cb * stride + j)] = x[(ca * d + i, cb * d + j)];
                    }
                }
            }
        }
        out
    }

    /// `e' ⊗ I` on a space with `comps = 2` blocks of size `stride`.
    pub fn e_prime_block(&self, stride: usize) -> Option<CMat> {
        let ext = self.extension.as_ref()?;
        let e = ext.e_prime().as_mat();
        let mut out = CMat::zeros(2 * stride, 2 * stride);
        for ca in 0..2 {
            for cb in 0..2 {
                for i in 0..stride {
                    out[(ca * stride + i, cb * stride + i)] = e[(ca, cb)];
                }
            }
        }
        Some(out)
    }

    /// Diagonal projection onto the first `i` truncated coordinates of every component,
    /// in element-core coordinates.
    pub fn cutoff(&self, i: usize) -> Result<CMat> {
        if i > self.fiber_dim {
            return Err(ProjError::Budget(format!("cutoff rank {i} beyond fiber_dim {}", self.fiber_dim)));
        }
        let d = self.fiber_dim;
        Ok(CMat::from_fn(self.core_dim(), self.core_dim(), |r, k| {
            if r == k && r % d < i {
                c(1.0)
            } else {
                c(0.0)
            }
        }))
    }

    /// Amplified model for `M_k` tensoring; extensions cannot be amplified.
    pub fn amplified(&self, k: usize) -> Result<SeqModel> {
        if self.extension.is_some() {
            return Err(ProjError::Unsupported("amplification of an extension model".into()));
        }
        if k == 0 {
            return Err(ProjError::Param("amplification order must be positive".into()));
        }
        let mut m = self.clone();
        m.comps *= k;
        if m.ghost_dim() > m.budget {
            return Err(ProjError::Budget(format!(
                "amplified ghost dimension {} exceeds budget {}",
                m.ghost_dim(),
                m.budget
            )));
        }
        Ok(m)
    }
}
