//! Maximal tournament reversal: per-component search for the acyclic
//! orientations of maximal consistency.
//!
//! [`max_weight_order`] is the exact single-optimum engine (subset dynamic
//! programming over vertex sets). [`enumerate_optimal`] finds every optimum
//! by re-solving with growing sets of barred reversals, and
//! [`dp_enumerate_optimal`] reads all optima straight off the DP table.
//! [`brute_force_optimal`] checks both on small instances.

mod brute;
mod dp;
mod exclusion;
mod problem;

pub use brute::{brute_force_optimal, brute_force_orders, for_each_permutation, BRUTE_FORCE_LIMIT};
pub use dp::{dp_enumerate_optimal, max_weight_order};
pub use exclusion::{
    enumerate_optimal, enumerate_optimal_traced, ExclusionOptions, ExclusionState, TraceStep,
    Traced, Verdict,
};
pub use problem::{Arc, ReversalSolution, SccProblem, DEFAULT_SCC_CAP};
