use super::model::{SeqModel, TailKind};
use crate::error::{ProjError, Result};
use crate::linalg::{c, op_norm, CMat, C64};

/// Content of an explicit fiber of an element.
#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    /// Same matrix as the limit `x_inf`.
    Limit,
    Zero,
    Own(CMat),
}

/// Eventually constant element `{x_n}` with `x_n = x_inf` for `n > N`, plus a scalar
/// multiple of the extension projection when the model has one.
#[derive(Debug, Clone, PartialEq)]
pub struct SeqElement {
    pub fibers: Vec<Slot>,
    pub limit: CMat,
    pub scalar: C64,
}

impl SeqElement {
    /// Element with every fiber equal to `x` (core coordinates).
    pub fn constant(model: &SeqModel, x: CMat) -> Result<Self> {
        let e = SeqElement { fibers: vec![Slot::Limit; model.trunc_len], limit: x, scalar: c(0.0) };
        e.validate(model)?;
        Ok(e)
    }

    pub fn zero(model: &SeqModel) -> Self {
        let n = model.core_dim();
        SeqElement { fibers: vec![Slot::Zero; model.trunc_len], limit: CMat::zeros(n, n), scalar: c(0.0) }
    }

    /// `lambda e + x`, extension models only.
    pub fn with_scalar(mut self, model: &SeqModel, lambda: C64) -> Result<Self> {
        if model.extension.is_none() && lambda != c(0.0) {
            return Err(ProjError::InvalidModel("scalar part needs an extension model".into()));
        }
        self.scalar = lambda;
        Ok(self)
    }

    pub fn with_fiber(mut self, n: usize, slot: Slot) -> Result<Self> {
        if n == 0 || n > self.fibers.len() {
            return Err(ProjError::Param(format!("fiber index {n} outside 1..={}", self.fibers.len())));
        }
        self.fibers[n - 1] = slot;
        Ok(self)
    }

    pub fn validate(&self, model: &SeqModel) -> Result<()> {
        let n = model.core_dim();
        let check = |m: &CMat| {
            if m.nrows() != n || m.ncols() != n {
                Err(ProjError::Dimension(format!("element fiber {}x{}, model core {n}", m.nrows(), m.ncols())))
            } else {
                Ok(())
            }
        };
        check(&self.limit)?;
        if self.fibers.len() != model.trunc_len {
            return Err(ProjError::Dimension(format!("{} fibers for N = {}", self.fibers.len(), model.trunc_len)));
        }
        for s in &self.fibers {
            if let Slot::Own(m) = s {
                check(m)?;
            }
        }
        if model.tail_kind == TailKind::DiagonalLimit {
            let off = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| self.limit[(i, j)].norm())
                .fold(0.0, f64::max);
            if off > 1e-12 {
                return Err(ProjError::InvalidModel(format!("limit fiber is not diagonal (off-diagonal {off:e})")));
            }
        }
        Ok(())
    }

    /// Core matrix of explicit fiber `n` (1-based).
    pub fn fiber_core(&self, n: usize) -> CMat {
        match &self.fibers[n - 1] {
            Slot::Limit => self.limit.clone(),
            Slot::Zero => CMat::zeros(self.limit.nrows(), self.limit.ncols()),
            Slot::Own(m) => m.clone(),
        }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        let herm = |m: &CMat| (m - m.adjoint()).iter().all(|z| z.norm() <= tol);
        herm(&self.limit)
            && self.scalar.im.abs() <= tol
            && self.fibers.iter().all(|s| match s {
                Slot::Own(m) => herm(m),
                _ => true,
            })
    }

    pub fn scale(&self, t: f64) -> Self {
        SeqElement {
            fibers: self
                .fibers
                .iter()
                .map(|s| match s {
                    Slot::Own(m) => Slot::Own(m * c(t)),
                    other => other.clone(),
                })
                .collect(),
            limit: &self.limit * c(t),
            scalar: self.scalar * t,
        }
    }

    /// Applies `f` to every core matrix (limit and own fibers).
    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        let zero_image = f(&CMat::zeros(self.limit.nrows(), self.limit.ncols()));
        let zero_stays = zero_image.iter().all(|z| z.norm() == 0.0);
        SeqElement {
            fibers: self
                .fibers
                .iter()
                .map(|s| match s {
                    Slot::Own(m) => Slot::Own(f(m)),
                    Slot::Zero if !zero_stays => Slot::Own(zero_image.clone()),
                    other => other.clone(),
                })
                .collect(),
            limit: f(&self.limit),
            scalar: self.scalar,
        }
    }

    /// `diag(x, ..., x)` style amplification: each core fiber is replaced by `f(x)`, where
    /// `f` maps a core matrix of the base model to one of the amplified model.
    pub fn amplify_with(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        SeqElement {
            fibers: self
                .fibers
                .iter()
                .map(|s| match s {
                    Slot::Own(m) => Slot::Own(f(m)),
                    other => other.clone(),
                })
                .collect(),
            limit: f(&self.limit),
            scalar: self.scalar,
        }
    }
}

impl SeqModel {
    /// Action of `a` on explicit fiber `n` (`Some`) or the limit fiber (`None`), in fiber
    /// space.
    pub fn fiber_action(&self, a: &SeqElement, n: Option<usize>) -> CMat {
        let core = match n {
            Some(n) => a.fiber_core(n),
            None => a.limit.clone(),
        };
        let mut m = self.embed_fiber(&core);
        if let Some(e) = self.e_prime_block(self.fiber_comp_dim()) {
            m += e * a.scalar;
        }
        m
    }

    /// Action of `a` on tail fibers, in ghost space.
    pub fn ghost_action(&self, a: &SeqElement) -> CMat {
        let mut m = self.embed_ghost(&a.limit);
        if let Some(e) = self.e_prime_block(self.ghost_comp_dim()) {
            m += e * a.scalar;
        }
        m
    }

    /// Action of `a` on the escaping complement, in component coordinates.
    pub fn complement_action(&self, a: &SeqElement) -> CMat {
        match &self.extension {
            Some(ext) => ext.e_prime().as_mat() * a.scalar,
            None => CMat::zeros(self.comps, self.comps),
        }
    }

    /// Sup-norm of `a` over all fibers, the escaping region and the scalar summand.
    pub fn element_norm(&self, a: &SeqElement) -> f64 {
        let mut best = op_norm(&self.fiber_action(a, None));
        let mut zero_seen = false;
        for (k, s) in a.fibers.iter().enumerate() {
            match s {
                Slot::Limit => {}
                Slot::Zero if zero_seen => {}
                Slot::Zero => {
                    zero_seen = true;
                    best = best.max(op_norm(&self.fiber_action(a, Some(k + 1))));
                }
                Slot::Own(_) => best = best.max(op_norm(&self.fiber_action(a, Some(k + 1)))),
            }
        }
        if self.extension.is_some() {
            best = best.max(a.scalar.norm());
        }
        best
    }
}
