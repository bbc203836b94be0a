//! Semi-complete digraphs, strongly connected components and condensation.

mod digraph;
pub mod dot;
mod scc;
mod semicomplete;

pub use digraph::Digraph;
pub use scc::{condense, scc_decompose, ComponentGraph, SccDump, SccPartition};
pub use semicomplete::{is_compatible, Orientation, SemiCompleteDigraph};
