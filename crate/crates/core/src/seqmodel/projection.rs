use super::model::{FiberId, SeqModel, TailKind};
use crate::error::{ProjError, Result};
use crate::linalg::{c, range_basis, CMat, FinProjection, TOL_RANK};
use crate::pairgeom::{decompose_subspaces, PairDecomposition};

/// One tail class: the fiber at every `n > N` with `(n - 1) % period == index` is the span
/// of these ghost vectors realized at `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailClass {
    /// Generators as ghost-space columns.
    pub gens: CMat,
    /// Orthonormal basis of their span.
    pub basis: CMat,
}

impl TailClass {
    pub fn new(model: &SeqModel, gens: CMat) -> Result<Self> {
        if gens.nrows() != model.ghost_dim() {
            return Err(ProjError::Dimension(format!(
                "tail generators have {} rows, ghost dimension is {}",
                gens.nrows(),
                model.ghost_dim()
            )));
        }
        let (g, d, b) = (model.ghost_comp_dim(), model.fiber_dim, model.block);
        for k in 0..gens.ncols() {
            let col = gens.column(k);
            let norm = col.norm();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(ProjError::InvalidModel(format!("tail generator {k} has norm {norm}, expected 1")));
            }
            if model.escape_dim > 0 {
                for comp in 0..model.comps {
                    for i in b..d {
                        if col[comp * g + i].norm() > 1e-14 {
                            return Err(ProjError::InvalidModel(format!(
                                "tail generator {k} uses coordinate {i}, reserved for escape axes"
                            )));
                        }
                    }
                }
            }
        }
        let basis = range_basis(&gens, TOL_RANK);
        Ok(TailClass { gens, basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }
}

/// Part of the projection living on coordinates beyond the truncation that escape to
/// infinity: `W ⊗ (those coordinates)` with `W` a projection on the components.
#[derive(Debug, Clone, PartialEq)]
pub struct Complement {
    /// Orthonormal basis of `W` in component coordinates.
    pub basis: CMat,
    /// Present in every fiber (explicit, tail and limit) rather than only in the limit.
    pub everywhere: bool,
}

/// Structural information that cannot be computed from finitely many fibers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FamilyMeta {
    /// The tail is given by structured classes whose weak limits are exact.
    pub structured: bool,
    /// Base vectors of the whole sequence are total in these components (basis in component
    /// coordinates), so the closure contains the full identity there.
    pub total: Option<CMat>,
    /// Scalar summand of the closure in an extension model.
    pub closure_scalar: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeqProjection {
    /// Orthonormal bases of fibers `1..=N` in fiber space.
    pub fibers: Vec<CMat>,
    /// Orthonormal basis of the limit fiber `p_inf`.
    pub limit: CMat,
    pub tail: Vec<TailClass>,
    pub complement: Option<Complement>,
    pub scalar: bool,
    pub meta: FamilyMeta,
}

fn orthonormal(m: &CMat) -> CMat {
    range_basis(m, TOL_RANK)
}

impl SeqProjection {
    /// Projection whose explicit fibers realize its tail classes, fiber `n` using class
    /// `(n - 1) % period`. `limit` is any spanning set for `p_inf` in fiber space.
    pub fn structured(model: &SeqModel, tail: Vec<CMat>, limit: CMat) -> Result<Self> {
        let tail = tail.into_iter().map(|g| TailClass::new(model, g)).collect::<Result<Vec<_>>>()?;
        if tail.is_empty() {
            return Err(ProjError::InvalidModel("at least one tail class is required".into()));
        }
        let period = tail.len();
        let fibers = (1..=model.trunc_len).map(|n| model.realize(n, &tail[(n - 1) % period].basis)).collect();
        Self::check_limit(model, &limit)?;
        Ok(SeqProjection {
            fibers,
            limit: orthonormal(&limit),
            tail,
            complement: None,
            scalar: false,
            meta: FamilyMeta { structured: true, ..Default::default() },
        })
    }

    /// Projection given fiber by fiber with no tail structure; its tail is taken to be the
    /// last explicit fiber held constant.
    pub fn explicit(model: &SeqModel, fibers: Vec<CMat>, limit: CMat) -> Result<Self> {
        if fibers.len() != model.trunc_len {
            return Err(ProjError::Dimension(format!("{} fibers for N = {}", fibers.len(), model.trunc_len)));
        }
        for f in &fibers {
            if f.nrows() != model.fiber_space_dim() {
                return Err(ProjError::Dimension(format!("fiber with {} rows", f.nrows())));
            }
        }
        Self::check_limit(model, &limit)?;
        let fibers: Vec<CMat> = fibers.iter().map(orthonormal).collect();
        let last = model.lift(fibers.last().expect("N >= 8"));
        Ok(SeqProjection {
            fibers,
            limit: orthonormal(&limit),
            tail: vec![TailClass { gens: last.clone(), basis: last }],
            complement: None,
            scalar: false,
            meta: FamilyMeta::default(),
        })
    }

    fn check_limit(model: &SeqModel, limit: &CMat) -> Result<()> {
        if limit.nrows() != model.fiber_space_dim() {
            return Err(ProjError::Dimension(format!(
                "limit fiber has {} rows, fiber space is {}",
                limit.nrows(),
                model.fiber_space_dim()
            )));
        }
        if model.tail_kind == TailKind::DiagonalLimit && limit.ncols() > 0 {
            let b = orthonormal(limit);
            let p = &b * b.adjoint();
            for i in 0..p.nrows() {
                for j in 0..p.ncols() {
                    if i != j && p[(i, j)].norm() > 1e-10 {
                        return Err(ProjError::InvalidModel("limit projection must be diagonal".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Replaces explicit fiber `n` with the span of the given fiber-space vectors.
    pub fn with_explicit(mut self, n: usize, gens: &CMat) -> Result<Self> {
        if n == 0 || n > self.fibers.len() {
            return Err(ProjError::Param(format!("fiber index {n} outside 1..={}", self.fibers.len())));
        }
        self.fibers[n - 1] = orthonormal(gens);
        Ok(self)
    }

    pub fn with_complement(mut self, w: &CMat, everywhere: bool) -> Self {
        self.complement = Some(Complement { basis: orthonormal(w), everywhere });
        self
    }

    pub fn with_scalar(mut self, r: bool) -> Self {
        self.scalar = r;
        self
    }

    pub fn with_total(mut self, w: &CMat) -> Self {
        self.meta.total = Some(orthonormal(w));
        self
    }

    pub fn with_closure_scalar(mut self, r: bool) -> Self {
        self.meta.closure_scalar = Some(r);
        self
    }

    pub fn zero(model: &SeqModel) -> Self {
        let d = model.fiber_space_dim();
        let empty = CMat::zeros(d, 0);
        SeqProjection {
            fibers: vec![empty.clone(); model.trunc_len],
            limit: empty,
            tail: vec![TailClass { gens: CMat::zeros(model.ghost_dim(), 0), basis: CMat::zeros(model.ghost_dim(), 0) }],
            complement: None,
            scalar: false,
            meta: FamilyMeta { structured: true, ..Default::default() },
        }
    }

    pub fn period(&self) -> usize {
        self.tail.len()
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.iter().all(|f| f.ncols() == 0)
            && self.limit.ncols() == 0
            && self.tail.iter().all(|t| t.rank() == 0)
            && self.complement.is_none()
            && !self.scalar
    }

    /// Projection matrix of explicit fiber `n` (1-based).
    pub fn fiber_projection(&self, n: usize) -> FinProjection {
        FinProjection::from_orthonormal(&self.fibers[n - 1])
    }

    pub fn limit_projection(&self) -> FinProjection {
        FinProjection::from_orthonormal(&self.limit)
    }

    /// Tail class `k` as a projection on the ghost space.
    pub fn tail_projection(&self, k: usize) -> FinProjection {
        FinProjection::from_orthonormal(&self.tail[k].basis)
    }

    /// Smallest closed projection above `p`: the limit fiber absorbs the weak limits of all
    /// tail generators (and the full identity where the metadata records totality).
    pub fn closure(&self, model: &SeqModel) -> Result<SeqProjection> {
        if !self.meta.structured {
            return Err(ProjError::ClosureUndecidable("explicit tail without family metadata".into()));
        }
        if model.tail_kind == TailKind::DiagonalLimit {
            return Err(ProjError::ClosureUndecidable("closures in the diagonal-limit variant".into()));
        }
        let mut cols: Vec<CMat> = vec![self.limit.clone()];
        for t in &self.tail {
            cols.push(model.weak_limit(&t.basis));
        }
        let mut complement = self.complement.clone();
        if let Some(w) = &self.meta.total {
            cols.push(component_block(model, w));
            let merged = match &complement {
                Some(cm) => orthonormal(&hcat(&[cm.basis.clone(), w.clone()])),
                None => w.clone(),
            };
            let everywhere = complement.as_ref().map(|cm| cm.everywhere).unwrap_or(false);
            complement = Some(Complement { basis: merged, everywhere });
        }
        let limit = orthonormal(&hcat(&cols));
        let scalar = if model.extension.is_some() {
            match self.meta.closure_scalar {
                Some(r) => r || self.scalar,
                None if self.scalar => true,
                None => {
                    return Err(ProjError::ClosureUndecidable("scalar summand of the closure needs metadata".into()))
                }
            }
        } else {
            false
        };
        Ok(SeqProjection {
            fibers: self.fibers.clone(),
            limit,
            tail: self.tail.clone(),
            complement,
            scalar,
            meta: self.meta.clone(),
        })
    }

    pub fn is_closed(&self, model: &SeqModel) -> Result<bool> {
        let cl = self.closure(model)?;
        Ok(cl.limit.ncols() == self.limit.ncols()
            && cl.scalar == self.scalar
            && cl.complement.as_ref().map(|c| c.basis.ncols()) == self.complement.as_ref().map(|c| c.basis.ncols()))
    }

    /// Closed, with every tail class equal to the limit fiber and nothing escaping.
    pub fn is_compact_in_model(&self, model: &SeqModel) -> Result<bool> {
        if self.complement.is_some() || self.scalar || !self.is_closed(model)? {
            return Ok(false);
        }
        let lim = model.lift(&self.limit);
        for t in &self.tail {
            let d = decompose_subspaces(&t.basis, &lim, model.ghost_dim(), model.tol.tol_angle_sq)?;
            if d.norm_distance() > 1e-8 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Join `p ∨ q`, fiber by fiber. Tail classes are combined class by class over the
    /// common period.
    pub fn join(&self, other: &SeqProjection, model: &SeqModel) -> Result<SeqProjection> {
        let fibers = self.fibers.iter().zip(&other.fibers).map(|(a, b)| orthonormal(&hcat(&[a.clone(), b.clone()]))).collect();
        let limit = orthonormal(&hcat(&[self.limit.clone(), other.limit.clone()]));
        let period = lcm(self.period(), other.period());
        let tail = (0..period)
            .map(|k| {
                let a = &self.tail[k % self.period()];
                let b = &other.tail[k % other.period()];
                let gens = hcat(&[a.gens.clone(), b.gens.clone()]);
                let basis = orthonormal(&gens);
                TailClass { gens, basis }
            })
            .collect();
        let complement = match (&self.complement, &other.complement) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(Complement {
                basis: orthonormal(&hcat(&[a.basis.clone(), b.basis.clone()])),
                everywhere: a.everywhere || b.everywhere,
            }),
        };
        let total = match (&self.meta.total, &other.meta.total) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(orthonormal(&hcat(&[a.clone(), b.clone()]))),
        };
        let closure_scalar = match (self.meta.closure_scalar, other.meta.closure_scalar) {
            (Some(a), Some(b)) => Some(a || b),
            _ => None,
        };
        let _ = model;
        Ok(SeqProjection {
            fibers,
            limit,
            tail,
            complement,
            scalar: self.scalar || other.scalar,
            meta: FamilyMeta { structured: self.meta.structured && other.meta.structured, total, closure_scalar },
        })
    }

    /// `diag(p, ..., p)` in the `k`-fold amplified model.
    pub fn amplify(&self, model: &SeqModel, k: usize) -> Result<(SeqModel, SeqProjection)> {
        let big = model.amplified(k)?;
        let kron = |b: &CMat| block_diag_repeat(b, k);
        let tail = self
            .tail
            .iter()
            .map(|t| TailClass { gens: kron(&t.gens), basis: kron(&t.basis) })
            .collect();
        let p = SeqProjection {
            fibers: self.fibers.iter().map(kron).collect(),
            limit: kron(&self.limit),
            tail,
            complement: self.complement.as_ref().map(|cm| Complement { basis: kron(&cm.basis), everywhere: cm.everywhere }),
            scalar: self.scalar,
            meta: FamilyMeta {
                structured: self.meta.structured,
                total: self.meta.total.as_ref().map(kron),
                closure_scalar: self.meta.closure_scalar,
            },
        };
        Ok((big, p))
    }

    /// Canonical decompositions of `(self, other)` at every fiber.
    pub fn pair_decompositions(&self, other: &SeqProjection, model: &SeqModel) -> Result<Vec<(FiberId, PairDecomposition)>> {
        let tol = model.tol.tol_angle_sq;
        let mut out = Vec::new();
        let fd = model.fiber_space_dim();
        for (n, (a, b)) in self.fibers.iter().zip(&other.fibers).enumerate() {
            out.push((FiberId::Explicit(n + 1), decompose_subspaces(a, b, fd, tol)?));
        }
        out.push((FiberId::Limit, decompose_subspaces(&self.limit, &other.limit, fd, tol)?));
        let period = lcm(self.period(), other.period());
        for k in 0..period {
            let a = &self.tail[k % self.period()].basis;
            let b = &other.tail[k % other.period()].basis;
            out.push((FiberId::Tail(k), decompose_subspaces(a, b, model.ghost_dim(), tol)?));
        }
        let empty = CMat::zeros(model.comps, 0);
        let wa = self.complement.as_ref().map(|c| c.basis.clone()).unwrap_or_else(|| empty.clone());
        let wb = other.complement.as_ref().map(|c| c.basis.clone()).unwrap_or(empty);
        if wa.ncols() + wb.ncols() > 0 {
            out.push((FiberId::Complement, decompose_subspaces(&wa, &wb, model.comps, tol)?));
        }
        if self.scalar || other.scalar {
            let one = CMat::from_element(1, 1, c(1.0));
            let none = CMat::zeros(1, 0);
            let sa = if self.scalar { one.clone() } else { none.clone() };
            let sb = if other.scalar { one } else { none };
            out.push((FiberId::Scalar, decompose_subspaces(&sa, &sb, 1, tol)?));
        }
        Ok(out)
    }

    /// `|p - q|` as a sup over fibers.
    pub fn norm_distance(&self, other: &SeqProjection, model: &SeqModel) -> Result<f64> {
        Ok(self.pair_decompositions(other, model)?.iter().map(|(_, d)| d.norm_distance()).fold(0.0, f64::max))
    }

    /// Smallest generic angle over all fibers, `pi/2` if there is none.
    pub fn angle(&self, other: &SeqProjection, model: &SeqModel) -> Result<f64> {
        Ok(self
            .pair_decompositions(other, model)?
            .iter()
            .map(|(_, d)| d.angle())
            .fold(std::f64::consts::FRAC_PI_2, f64::min))
    }
}

/// `W ⊗ I_d` on the truncated coordinates, in fiber space.
pub fn component_block(model: &SeqModel, w: &CMat) -> CMat {
    let (fd, d) = (model.fiber_comp_dim(), model.fiber_dim);
    let mut out = CMat::zeros(model.fiber_space_dim(), w.ncols() * d);
    for k in 0..w.ncols() {
        for comp in 0..model.comps {
            for i in 0..d {
                out[(comp * fd + i, k * d + i)] = w[(comp, k)];
            }
        }
    }
    out
}

pub fn hcat(blocks: &[CMat]) -> CMat {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), (rows, b.ncols())).copy_from(b);
        at += b.ncols();
    }
    out
}

/// `I_k ⊗ b` for a column block `b`.
pub fn block_diag_repeat(b: &CMat, k: usize) -> CMat {
    let (r, cc) = (b.nrows(), b.ncols());
    let mut out = CMat::zeros(r * k, cc * k);
    for j in 0..k {
        out.view_mut((j * r, j * cc), (r, cc)).copy_from(b);
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
