//! Truncated sequence models of `c ⊗ K` and their variants, with projections in the
//! bidual described fiber by fiber.

mod alpha;
mod element;
mod extrapolate;
mod model;
mod projection;
mod regularity;

pub use alpha::*;
pub use element::{SeqElement, Slot};
pub use extrapolate::{extrapolate, FitMethod, LimitFit};
pub use model::{BusbyExtension, FiberId, ModelSpec, SeqModel, TailKind};
pub use projection::{block_diag_repeat, component_block, hcat, lcm, Complement, FamilyMeta, SeqProjection, TailClass};
pub use regularity::*;
