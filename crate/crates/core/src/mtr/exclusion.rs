use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::dp::{check_capacity, DpTable};
use super::{Arc, ReversalSolution, SccProblem, DEFAULT_SCC_CAP};
use crate::{Result, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExclusionOptions {
    pub cap: usize,
    /// Skip exclusion sets containing one already known to be suboptimal.
    pub prune_supersets: bool,
}

impl Default for ExclusionOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_SCC_CAP,
            prune_supersets: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// New best score; earlier results were discarded.
    Improved,
    /// Ties the best score.
    Optimal,
    Suboptimal,
    /// No order avoids every barred reversal.
    Infeasible,
    /// Skipped: contains a set recorded as suboptimal.
    Pruned,
}

/// One processed exclusion set.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep<W> {
    pub excluded: BTreeSet<Arc>,
    pub score: Option<W>,
    pub reversed: Option<BTreeSet<Arc>>,
    pub verdict: Verdict,
}

/// Queue and memories of the exclusion search.
///
/// Exclusion sets are barred from reversal; the queue holds them in
/// non-decreasing size without repeats.
#[derive(Debug, Default)]
pub struct ExclusionState {
    pub queue: VecDeque<BTreeSet<Arc>>,
    pub mem_fail: Vec<BTreeSet<Arc>>,
    pub mem_success: HashSet<BTreeSet<Arc>>,
    enqueued: HashSet<BTreeSet<Arc>>,
}

impl ExclusionState {
    fn has_failed_subset(&self, q: &BTreeSet<Arc>) -> bool {
        self.mem_fail.iter().any(|f| f.is_subset(q))
    }

    fn push(&mut self, q: BTreeSet<Arc>, prune: bool) {
        if self.mem_success.contains(&q) || (prune && self.has_failed_subset(&q)) {
            return;
        }
        if self.enqueued.insert(q.clone()) {
            self.queue.push_back(q);
        }
    }

    fn drop_supersets(&mut self, q: &BTreeSet<Arc>) {
        self.queue.retain(|other| !q.is_subset(other));
    }
}

/// Every optimal acyclic orientation of the component, each exactly once,
/// sorted by reversal set.
pub fn enumerate_optimal<W: Weight>(
    p: &SccProblem<W>,
    options: ExclusionOptions,
) -> Result<Vec<ReversalSolution<W>>> {
    search(p, options, None)
}

/// Optimal solutions and the processed exclusion sets, in order.
pub type Traced<W> = (Vec<ReversalSolution<W>>, Vec<TraceStep<W>>);

/// As [`enumerate_optimal`], also returning every processed exclusion set.
pub fn enumerate_optimal_traced<W: Weight>(
    p: &SccProblem<W>,
    options: ExclusionOptions,
) -> Result<Traced<W>> {
    let mut trace = Vec::new();
    let solutions = search(p, options, Some(&mut trace))?;
    Ok((solutions, trace))
}

// Starting from the unconstrained optimum, each optimal solution A found
// under exclusion set q spawns the sets q ∪ {e} for e in A. Any optimum E'
// not yet found is reachable: A \ E' is non-empty, so some child still
// avoids E' and its solve is again optimal, and the excluded set grows
// until E' is the only optimum left. Excluding more never raises the
// constrained optimum, which is what makes dropping supersets of a failed
// set safe.
fn search<W: Weight>(
    p: &SccProblem<W>,
    options: ExclusionOptions,
    mut trace: Option<&mut Vec<TraceStep<W>>>,
) -> Result<Vec<ReversalSolution<W>>> {
    check_capacity(p, options.cap)?;
    let mut state = ExclusionState::default();
    state.push(BTreeSet::new(), options.prune_supersets);

    let mut max_score: Option<W> = None;
    let mut results: BTreeMap<BTreeSet<Arc>, ReversalSolution<W>> = BTreeMap::new();

    while let Some(q) = state.queue.pop_front() {
        if options.prune_supersets && state.has_failed_subset(&q) {
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceStep {
                    excluded: q,
                    score: None,
                    reversed: None,
                    verdict: Verdict::Pruned,
                });
            }
            continue;
        }

        let table = DpTable::solve(p, &q);
        let found = match table.one_order() {
            Some(order) => Some(p.solution_for(p.reversed_by(&order))?),
            None => None,
        };

        let verdict = match (&found, max_score) {
            (None, _) => Verdict::Infeasible,
            (Some(_), None) => Verdict::Improved,
            (Some(s), Some(m)) if s.score > m => Verdict::Improved,
            (Some(s), Some(m)) if s.score == m => Verdict::Optimal,
            _ => Verdict::Suboptimal,
        };

        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceStep {
                excluded: q.clone(),
                score: found.as_ref().map(|s| s.score),
                reversed: found.as_ref().map(|s| s.reversed.clone()),
                verdict,
            });
        }

        match verdict {
            Verdict::Improved | Verdict::Optimal => {
                let solution = found.expect("optimal verdict carries a solution");
                if verdict == Verdict::Improved {
                    max_score = Some(solution.score);
                    results.clear();
                    state.mem_success.clear();
                }
                state.mem_success.insert(q.clone());
                for &arc in &solution.reversed {
                    let mut child = q.clone();
                    child.insert(arc);
                    state.push(child, options.prune_supersets);
                }
                results.entry(solution.reversed.clone()).or_insert(solution);
            }
            Verdict::Suboptimal | Verdict::Infeasible => {
                if options.prune_supersets {
                    state.drop_supersets(&q);
                }
                state.mem_fail.push(q);
            }
            Verdict::Pruned => unreachable!(),
        }
    }

    Ok(results.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtr::brute_force_optimal;
    use crate::{Rational, WeightMatrix};

    #[test]
    fn equal_three_cycle_yields_all_three_reversals() {
        // The three single-arc reversals tie; a search that only ever bars
        // subsets of one solution can bounce between two of them.
        let w = WeightMatrix::from_fn(3, |i, j| {
            if (j + 3 - i) % 3 == 1 {
                Rational::new(3, 4)
            } else {
                Rational::new(1, 4)
            }
        });
        let p = SccProblem::from_weights(w).unwrap();
        for prune in [true, false] {
            let sols = enumerate_optimal(
                &p,
                ExclusionOptions {
                    prune_supersets: prune,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(sols, brute_force_optimal(&p).unwrap());
            assert_eq!(sols.len(), 3);
        }
    }

    #[test]
    fn acyclic_pair_has_one_empty_solution() {
        let w = WeightMatrix::from_rows(vec![vec![None, Some(7i64)], vec![Some(2), None]]);
        let p = SccProblem::from_weights(w).unwrap();
        let (sols, trace) = enumerate_optimal_traced(&p, ExclusionOptions::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].reversed.is_empty());
        assert_eq!(sols[0].order, vec![0, 1]);
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].verdict, Verdict::Improved);
    }

    #[test]
    fn trace_records_failures_in_size_order() {
        let w = WeightMatrix::from_rows(vec![
            vec![None, Some(9i64), Some(9)],
            vec![Some(1), None, Some(8)],
            vec![Some(1), Some(2), None],
        ]);
        let arcs = crate::graph::Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        let p = SccProblem::new(vec![0, 1, 2], arcs, w).unwrap();
        let (sols, trace) = enumerate_optimal_traced(&p, ExclusionOptions::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].reversed, [(2, 0)].into());
        assert!(trace
            .windows(2)
            .all(|w| w[0].excluded.len() <= w[1].excluded.len()));
        assert!(trace.iter().any(|t| t.verdict == Verdict::Suboptimal));
    }
}
