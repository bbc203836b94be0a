use std::collections::{BTreeMap, BTreeSet};

use super::{Arc, ReversalSolution, SccProblem};
use crate::{Error, Result, Weight};

/// Hard ceiling on the DP table: 2^28 cells is already several GiB.
const TABLE_LIMIT: usize = 28;

/// Subset DP over one problem. `best[S]` is the maximal score of an order
/// of the vertex set `S` (bitmask, local indices), `None` when every order
/// of `S` reverses a barred arc.
pub(crate) struct DpTable<'a, W> {
    problem: &'a SccProblem<W>,
    gain: Vec<W>,
    best: Vec<Option<W>>,
    barred_out: Vec<u32>,
}

pub(crate) fn check_capacity<W: Weight>(p: &SccProblem<W>, cap: usize) -> Result<()> {
    if p.len() > cap.min(TABLE_LIMIT) {
        return Err(Error::SccCapacity {
            vertices: p.vertices().iter().map(|v| v.to_string()).collect(),
            cap: cap.min(TABLE_LIMIT),
        });
    }
    Ok(())
}

impl<'a, W: Weight> DpTable<'a, W> {
    pub(crate) fn solve(problem: &'a SccProblem<W>, barred: &BTreeSet<Arc>) -> Self {
        let k = problem.len();
        let gain: Vec<W> = (0..k * k)
            .map(|c| {
                let (a, b) = (c / k, c % k);
                if a == b {
                    W::zero()
                } else {
                    problem.local_gain(a, b)
                }
            })
            .collect();
        // barred_out[v] holds u when the arc v -> u may not be reversed,
        // i.e. u may not precede v.
        let mut barred_out = vec![0u32; k];
        for &(u, v) in barred {
            if let (Some(a), Some(b)) = (problem.local_index(u), problem.local_index(v)) {
                if problem.arcs().has_edge(a, b) {
                    barred_out[a] |= 1 << b;
                }
            }
        }

        let full = 1usize << k;
        let mut best: Vec<Option<W>> = vec![None; full];
        best[0] = Some(W::zero());
        for set in 1..full {
            let mut acc: Option<W> = None;
            let mut bits = set;
            while bits != 0 {
                let last = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let rest = set & !(1 << last);
                if let Some(cand) = Self::extend(&gain, &best, &barred_out, k, rest, last) {
                    if acc.is_none_or(|a| cand > a) {
                        acc = Some(cand);
                    }
                }
            }
            best[set] = acc;
        }
        Self {
            problem,
            gain,
            best,
            barred_out,
        }
    }

    /// Score of ordering `rest` optimally and appending `last`.
    fn extend(
        gain: &[W],
        best: &[Option<W>],
        barred_out: &[u32],
        k: usize,
        rest: usize,
        last: usize,
    ) -> Option<W> {
        if barred_out[last] as usize & rest != 0 {
            return None;
        }
        let mut total = best[rest]?;
        let mut bits = rest;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            total = total + gain[u * k + last];
        }
        Some(total)
    }

    fn full(&self) -> usize {
        (1usize << self.problem.len()) - 1
    }

    pub(crate) fn optimum(&self) -> Option<W> {
        self.best[self.full()]
    }

    /// Vertices that can close an optimal order of `set`, ascending.
    fn optimal_lasts(&self, set: usize) -> Vec<usize> {
        let Some(target) = self.best[set] else {
            return Vec::new();
        };
        let k = self.problem.len();
        (0..k)
            .filter(|&v| set & (1 << v) != 0)
            .filter(|&v| {
                Self::extend(
                    &self.gain,
                    &self.best,
                    &self.barred_out,
                    k,
                    set & !(1 << v),
                    v,
                ) == Some(target)
            })
            .collect()
    }

    /// One optimal order (ids), choosing the smallest closing vertex at
    /// every step.
    pub(crate) fn one_order(&self) -> Option<Vec<usize>> {
        self.optimum()?;
        let mut set = self.full();
        let mut rev = Vec::with_capacity(self.problem.len());
        while set != 0 {
            let last = *self.optimal_lasts(set).first()?;
            rev.push(self.problem.vertices()[last]);
            set &= !(1 << last);
        }
        rev.reverse();
        Some(rev)
    }

    /// Every optimal order (ids).
    pub(crate) fn all_orders(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.optimum().is_some() {
            let mut suffix = Vec::new();
            self.collect(self.full(), &mut suffix, &mut out);
        }
        out
    }

    fn collect(&self, set: usize, suffix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if set == 0 {
            out.push(suffix.iter().rev().copied().collect());
            return;
        }
        for last in self.optimal_lasts(set) {
            suffix.push(self.problem.vertices()[last]);
            self.collect(set & !(1 << last), suffix, out);
            suffix.pop();
        }
    }
}

/// Maximum-score order whose reversal set avoids `barred`.
///
/// Returns `Ok(None)` when every order of the component reverses some
/// barred arc.
pub fn max_weight_order<W: Weight>(
    p: &SccProblem<W>,
    barred: &BTreeSet<Arc>,
    cap: usize,
) -> Result<Option<ReversalSolution<W>>> {
    check_capacity(p, cap)?;
    let table = DpTable::solve(p, barred);
    let Some(order) = table.one_order() else {
        return Ok(None);
    };
    let solution = p.solution_for(p.reversed_by(&order))?;
    debug_assert!(solution.score == table.optimum().unwrap());
    Ok(Some(solution))
}

/// All optimal solutions, read from the argmax structure of the DP table.
/// Sorted by reversal set.
pub fn dp_enumerate_optimal<W: Weight>(
    p: &SccProblem<W>,
    cap: usize,
) -> Result<Vec<ReversalSolution<W>>> {
    check_capacity(p, cap)?;
    let table = DpTable::solve(p, &BTreeSet::new());
    let mut by_reversal: BTreeMap<BTreeSet<Arc>, ()> = BTreeMap::new();
    for order in table.all_orders() {
        by_reversal.insert(p.reversed_by(&order), ());
    }
    by_reversal
        .into_keys()
        .map(|reversed| p.solution_for(reversed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, WeightMatrix};

    fn r(x: i64) -> Rational {
        Rational::new(x, 10)
    }

    /// a->b->c->a with C(a->b)=.9, C(b->c)=.8, C(c->a)=.1 ... weights as
    /// listed; a=0, b=1, c=2.
    fn three_cycle() -> SccProblem<Rational> {
        let w = WeightMatrix::from_rows(vec![
            vec![None, Some(r(9)), Some(r(9))],
            vec![Some(r(1)), None, Some(r(8))],
            vec![Some(r(1)), Some(r(2)), None],
        ]);
        let arcs = crate::graph::Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        SccProblem::new(vec![0, 1, 2], arcs, w).unwrap()
    }

    #[test]
    fn three_cycle_optimum() {
        // Exhaustive 3! enumeration (scores in tenths):
        // abc: .9+.9+.8=2.6  acb: .9+.9+.2=2.0  bac: .1+.8+.9=1.8
        // bca: .8+.1+.1=1.0  cab: .1+.2+.9=1.2  cba: .2+.1+.1=0.4
        let p = three_cycle();
        let s = max_weight_order(&p, &BTreeSet::new(), 20).unwrap().unwrap();
        assert_eq!(s.order, vec![0, 1, 2]);
        assert_eq!(s.score, r(26));
        assert_eq!(s.reversed, [(2, 0)].into());
    }

    #[test]
    fn barring_the_optimal_reversal_lowers_the_score() {
        // Orders keeping c before a: bca 1.0, cab 1.2, cba 0.4 -> cab.
        let p = three_cycle();
        let s = max_weight_order(&p, &[(2, 0)].into(), 20).unwrap().unwrap();
        assert_eq!(s.order, vec![2, 0, 1]);
        assert_eq!(s.score, r(12));
        assert!(!s.reversed.contains(&(2, 0)));
    }

    #[test]
    fn barring_every_arc_is_infeasible() {
        let p = three_cycle();
        let all: BTreeSet<Arc> = [(0, 1), (1, 2), (2, 0)].into();
        assert_eq!(max_weight_order(&p, &all, 20).unwrap(), None);
    }

    #[test]
    fn singleton_has_empty_reversal() {
        let w: WeightMatrix<Rational> = WeightMatrix::empty(1);
        let p = SccProblem::new(vec![7], crate::graph::Digraph::new(1), w).unwrap();
        let s = max_weight_order(&p, &BTreeSet::new(), 20).unwrap().unwrap();
        assert_eq!(s.order, vec![7]);
        assert!(s.reversed.is_empty());
        assert_eq!(s.score, r(0));
    }

    #[test]
    fn capacity_error_lists_vertices() {
        let p = three_cycle();
        match max_weight_order(&p, &BTreeSet::new(), 2) {
            Err(Error::SccCapacity { vertices, cap }) => {
                assert_eq!(vertices, vec!["0", "1", "2"]);
                assert_eq!(cap, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dp_enumeration_finds_three_way_tie() {
        let w = WeightMatrix::from_fn(3, |i, j| if (j + 3 - i) % 3 == 1 { 7i64 } else { 3 });
        let p = SccProblem::from_weights(w).unwrap();
        let sols = dp_enumerate_optimal(&p, 20).unwrap();
        assert_eq!(sols.len(), 3);
        assert!(sols.iter().all(|s| s.reversed.len() == 1 && s.score == 17));
    }
}
