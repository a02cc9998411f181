//! Facets of the spanning-tree polytope of a multigraph.
//!
//! The crate computes the locked-subgraph facet description per block,
//! the matroid-level bases-polytope description used to cross-check it,
//! and brute-force oracles (tree enumeration, exact ranks, convex hull)
//! that verify both at small scale.

pub mod closures;
pub mod error;
pub mod facets;
pub mod fixtures;
pub mod graph;
pub mod locked;
pub mod matroid;
pub mod oracle;

pub use error::{Error, Result};
