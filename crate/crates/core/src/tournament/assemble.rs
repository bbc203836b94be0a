use std::collections::BTreeSet;

use super::{compose, reintroduce_bidirected, AcyclicTournament, OrderDistribution};
use crate::consistency::ConsistencyMatrix;
use crate::graph::{scc_decompose, SccPartition, SemiCompleteDigraph};
use crate::mtr::{
    dp_enumerate_optimal, enumerate_optimal_traced, ExclusionOptions, ReversalSolution, SccProblem,
    TraceStep, DEFAULT_SCC_CAP,
};
use crate::{Error, ExactDistribution, Rational, Result, Weight, WeightMatrix};

/// Which component solver enumerates the optima.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Repeated exact solves under growing exclusion sets.
    #[default]
    ExclusionSearch,
    /// All argmax paths of a single DP table.
    DpEnumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub scc_cap: usize,
    pub engine: Engine,
    pub prune_supersets: bool,
    /// Repeat non-informative removal until nothing changes.
    pub fixpoint_removal: bool,
    /// Put removed vertices back at every position of every order.
    pub insert_removed: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            scc_cap: DEFAULT_SCC_CAP,
            engine: Engine::default(),
            prune_supersets: true,
            fixpoint_removal: false,
            insert_removed: false,
        }
    }
}

/// Exclusion-search trace of one component, vertices named.
#[derive(Debug, Clone)]
pub struct SccTrace<W> {
    pub vertices: Vec<String>,
    pub steps: Vec<TraceStep<W>>,
}

/// Intermediate products of a search, kept for exports.
#[derive(Debug, Clone)]
pub struct SearchRun<W> {
    pub full: SemiCompleteDigraph<W>,
    /// `full` without non-informative vertices.
    pub informative: SemiCompleteDigraph<W>,
    /// Components of `informative` after bidirected pairs are stripped.
    pub partition: SccPartition,
    pub traces: Vec<SccTrace<W>>,
    pub distribution: OrderDistribution<W>,
}

/// Runs the whole search on a weight matrix and keeps the intermediates.
pub fn run_search<W: Weight>(
    names: Vec<String>,
    weights: WeightMatrix<W>,
    options: &SearchOptions,
) -> Result<SearchRun<W>> {
    let full = SemiCompleteDigraph::build(names, weights)?;
    let (informative, removed) = full.prune_non_informative(options.fixpoint_removal);
    if informative.is_empty() {
        return Err(Error::Validation(format!(
            "no informative variables: all {} vertices are non-informative",
            full.len()
        )));
    }

    let (reduced, stripped) = informative.strip_bidirected();
    let partition = scc_decompose(&reduced);

    let mut solutions: Vec<Vec<ReversalSolution<W>>> = Vec::with_capacity(partition.len());
    let mut traces = Vec::new();
    for members in &partition.components {
        if members.len() < 2 {
            solutions.push(Vec::new());
            continue;
        }
        let member_names: Vec<String> = members
            .iter()
            .map(|&v| informative.names()[v].clone())
            .collect();
        if members.len() > options.scc_cap {
            return Err(Error::SccCapacity {
                vertices: member_names,
                cap: options.scc_cap,
            });
        }
        let problem = SccProblem::from_reduced(&reduced, informative.weights(), members)?;
        let found = match options.engine {
            Engine::ExclusionSearch => {
                let (found, steps) = enumerate_optimal_traced(
                    &problem,
                    ExclusionOptions {
                        cap: options.scc_cap,
                        prune_supersets: options.prune_supersets,
                    },
                )?;
                traces.push(SccTrace {
                    vertices: member_names,
                    steps,
                });
                found
            }
            Engine::DpEnumeration => dp_enumerate_optimal(&problem, options.scc_cap)?,
        };
        solutions.push(found);
    }

    let skeletons = compose(&solutions, &reduced, &partition)?;
    let mut orders: BTreeSet<AcyclicTournament> = BTreeSet::new();
    for skeleton in &skeletons {
        orders.extend(reintroduce_bidirected(skeleton, &stripped)?);
    }

    let (vertices, orders, weights) = if options.insert_removed && !removed.is_empty() {
        (
            full.names().to_vec(),
            insert_removed(&informative, &full, &orders),
            full.weights(),
        )
    } else {
        (informative.names().to_vec(), orders, informative.weights())
    };

    let mut tournaments: Vec<AcyclicTournament> = orders.into_iter().collect();
    tournaments.sort_by_cached_key(|t| t.names(&vertices));
    let score = weights.order_score(tournaments[0].order());
    if let Some(t) = tournaments
        .iter()
        .find(|t| weights.order_score(t.order()) != score)
    {
        return Err(Error::Internal(format!(
            "emitted orders disagree on score: {:?}",
            t.names(&vertices)
        )));
    }

    Ok(SearchRun {
        distribution: OrderDistribution {
            vertices,
            tournaments,
            score,
            removed,
        },
        full,
        informative,
        partition,
        traces,
    })
}

/// Every way of interleaving the removed vertices into each order, as
/// orders over the full vertex set.
fn insert_removed<W: Weight>(
    informative: &SemiCompleteDigraph<W>,
    full: &SemiCompleteDigraph<W>,
    orders: &BTreeSet<AcyclicTournament>,
) -> BTreeSet<AcyclicTournament> {
    let kept: BTreeSet<&String> = informative.names().iter().collect();
    let extra: Vec<usize> = (0..full.len())
        .filter(|&v| !kept.contains(&full.names()[v]))
        .collect();
    let mut out = BTreeSet::new();
    for t in orders {
        let mut seqs: Vec<Vec<usize>> = vec![t
            .order()
            .iter()
            .map(|&v| full.index_of(&informative.names()[v]).expect("same names"))
            .collect()];
        for &x in &extra {
            seqs = seqs
                .into_iter()
                .flat_map(|s| {
                    (0..=s.len()).map(move |pos| {
                        let mut s = s.clone();
                        s.insert(pos, x);
                        s
                    })
                })
                .collect();
        }
        out.extend(
            seqs.into_iter()
                .map(|s| AcyclicTournament::new(s).expect("permutation")),
        );
    }
    out
}

/// Distribution of maximally consistent orders over a weight matrix.
pub fn lcos_search<W: Weight>(
    names: Vec<String>,
    weights: WeightMatrix<W>,
    options: &SearchOptions,
) -> Result<OrderDistribution<W>> {
    run_search(names, weights, options).map(|run| run.distribution)
}

/// Exact distribution for a consistency matrix. The search runs on integer
/// true-counts (all cells share the repeat count as denominator) and the
/// score is reported as a reduced fraction.
pub fn assemble_distribution(
    matrix: &ConsistencyMatrix,
    options: &SearchOptions,
) -> Result<ExactDistribution> {
    let repeats = matrix.repeats() as i64;
    let names = matrix.names();
    let counts = matrix.counts()?;
    lcos_search(names, counts, options).map(|d| d.map_score(|s| Rational::new(s, repeats)))
}
