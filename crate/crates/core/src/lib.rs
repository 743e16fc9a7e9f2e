//! Exact intersection theory on split projective towers.
//!
//! The crate builds varieties as towers over products of projective spaces
//! (projectivized split bundles, zero loci of split bundles), computes their
//! numerical invariants through Hirzebruch–Riemann–Roch in exact rational
//! arithmetic, keeps additive bookkeeping for blow-ups and semiorthogonal
//! decompositions, and cross-checks degeneracy-locus geometry by brute-force
//! point counts over small prime fields.

pub mod chowcore;
pub mod fforacle;
pub mod invariants;
pub mod ledger;
pub mod properties;
pub mod tower;

pub use chowcore::{ChowClass, ChowError, ChowPresentation, KClass};
pub use tower::{Preset, Space, SplitBundle};
