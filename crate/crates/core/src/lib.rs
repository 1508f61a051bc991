//! Superpermutations, toric superpermutation matrices and the transition
//! graphs between permutation classes.

pub mod acceptance;
pub mod bounds;
pub mod census;
pub mod classic;
pub mod error;
pub mod graph;
pub mod pathfinder;
pub mod perm;
pub mod report;
pub mod toric;

pub use error::{Error, Result};
pub use perm::{IncClass, PermMatrix, Permutation, RotClass};
pub use toric::{ToricBinaryMatrix, UniversalWord};

/// Revision of the cycle-census and bounds formulas. Bumped whenever a
/// formula change can alter a printed value.
pub const FORMULA_REVISION: &str = "census-1 bounds-1";
