//! Search for odd-clique fans `F_k(2r + 1)` in dense graphs with small
//! independence number.
//!
//! The [`finder`] runs the constructive peeling / clique-extension /
//! rotation / augmentation procedure and returns either a verified fan or a
//! checkable witness that one of its hypotheses fails on the input. The
//! [`witness`] and [`oracle`] modules provide exhaustive searches used to
//! cross-check every step at small scale.

mod decimal;
pub mod error;
pub mod finder;
pub mod generators;
pub mod graph;
pub mod invariants;
pub mod oracle;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, InducedSubgraph, VertexSet};
