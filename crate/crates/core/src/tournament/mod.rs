//! From per-component optima to the full set of maximally consistent
//! causal orders.

mod assemble;
mod compose;
mod distribution;

pub use assemble::{
    assemble_distribution, lcos_search, run_search, Engine, SccTrace, SearchOptions, SearchRun,
};
pub use compose::{compose, reintroduce_bidirected, strip_bidirected};
pub use distribution::{AcyclicTournament, DistributionJson, OrderDistribution};
