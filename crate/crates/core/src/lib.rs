//! Projections in the bidual of a C*-algebra, modelled on truncated sequence algebras:
//! distance to relatively compact projections, regularity constants and bounds for joins.

pub mod config;
pub mod error;
pub mod linalg;
pub mod nearest;
pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod pairgeom;
pub mod report;
pub mod seqmodel;

pub use error::{ProjError, Result};
