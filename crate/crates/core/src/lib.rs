//! Digraph orientation and submodular-flow toolkit.
//!
//! The crate computes k-arc-connected flips, flip/dijoin decompositions and
//! integral points of the intersection of two crossing-submodular flow
//! systems. Every constructive routine returns a certificate that is
//! re-verified before it is handed back, and the [`oracles`] module provides
//! independent brute-force checks at desk scale.

pub mod base_point;
pub mod error;
pub mod gen;
pub mod graph;
pub mod lp;
pub mod oracles;
pub mod setfam;
pub mod solvers;
pub mod transshipment;

pub use error::{Error, ErrorClass, Result};
pub use graph::{ArcSet, Digraph, VertexSet};
pub use lp::Rational;
pub use setfam::{CrossingFamily, LatticeFamily, SubmodularOracle};

/// Largest vertex count for routines that iterate over all vertex subsets.
pub const ENUMERATION_CAP: usize = 22;

/// Largest vertex count representable by [`VertexSet`].
pub const MAX_VERTICES: usize = 63;
