//! Orientation of undirected binary phylogenetic networks into rooted
//! directed network classes.
//!
//! The library decides whether an undirected binary phylogenetic network can
//! be oriented — a root inserted on one edge and every other edge directed —
//! so that the result is a rooted network of a desired class, tree-child in
//! particular. It provides:
//!
//! - [`netmodel`]: the undirected/directed network model, validation and the
//!   class predicates;
//! - [`constrained`]: orientation under a fixed root edge and in-degree map,
//!   plus an exhaustive oracle for certifying it;
//! - [`cyclebasis`]: minimum cycle bases, the search scaffold of the solvers;
//! - [`solvers`]: the exact basis-driven search, the distance-maximising
//!   tree-child heuristic, and the exhaustive placement baseline;
//! - [`generator`]: seeded random network generation via a backwards
//!   coalescent/split process;
//! - [`fileio`]: the line-based network file formats.

pub mod constrained;
pub mod cyclebasis;
pub mod fileio;
pub mod generator;
pub mod netmodel;
pub mod solvers;
