//! Causal order search from pairwise consistency scores.
//!
//! The pipeline turns repeated true/false answers about ordered variable
//! pairs into a consistency matrix, keeps the best-supported direction of
//! every pair in a semi-complete digraph, and enumerates every acyclic
//! tournament (total causal order) of maximal total consistency.
//!
//! Graph and solver code is generic over [`Weight`], so the same search runs
//! on exact rationals, integer numerators or floats. The aliases below name
//! the common instantiations.

pub mod consistency;
pub mod dataset;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod mtr;
pub mod scalar;
pub mod tournament;

pub use error::{Error, Result};
pub use scalar::{Weight, WeightMatrix};

/// Exact score type used for consistency values and tournament scores.
pub type Rational = num_rational::Ratio<i64>;

/// Consistency weights stored as exact rationals.
pub type ExactWeights = WeightMatrix<Rational>;
/// Consistency weights stored as floats (imported from external tools).
pub type FloatWeights = WeightMatrix<f64>;

/// Distribution whose shared score is an exact rational.
pub type ExactDistribution = tournament::OrderDistribution<Rational>;
/// Distribution scored in floating point.
pub type FloatDistribution = tournament::OrderDistribution<f64>;

pub type ExactSemiComplete = graph::SemiCompleteDigraph<Rational>;
pub type ExactSccProblem = mtr::SccProblem<Rational>;
pub type ExactSolution = mtr::ReversalSolution<Rational>;
