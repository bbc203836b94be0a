use std::collections::BTreeSet;

use crate::graph::Digraph;
use crate::{Error, Result, Weight, WeightMatrix};

/// Directed arc between vertex ids.
pub type Arc = (usize, usize);

/// Largest component solved exactly unless the caller raises the cap.
pub const DEFAULT_SCC_CAP: usize = 20;

/// One strongly connected component to acyclify.
///
/// Vertices keep their ids from the enclosing graph and are stored sorted.
/// Pairs carry at most one arc: bidirected pairs are stripped before
/// solving and contribute nothing to the score.
#[derive(Debug, Clone, PartialEq)]
pub struct SccProblem<W> {
    vertices: Vec<usize>,
    arcs: Digraph,
    weights: WeightMatrix<W>,
}

impl<W: Weight> SccProblem<W> {
    /// `arcs` and `weights` are indexed locally, position `a` standing for
    /// `vertices[a]`.
    pub fn new(vertices: Vec<usize>, arcs: Digraph, weights: WeightMatrix<W>) -> Result<Self> {
        let k = vertices.len();
        if arcs.vertex_count() != k || weights.len() != k {
            return Err(Error::Validation("problem dimensions disagree".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "problem vertices must be strictly increasing".into(),
            ));
        }
        for a in 0..k {
            for b in a + 1..k {
                if arcs.has_edge(a, b) || arcs.has_edge(b, a) {
                    if arcs.has_edge(a, b) && arcs.has_edge(b, a) {
                        return Err(Error::Validation(format!(
                            "pair ({}, {}) is bidirected; strip it before solving",
                            vertices[a], vertices[b]
                        )));
                    }
                    let (ab, ba) = match (weights.get(a, b), weights.get(b, a)) {
                        (Some(x), Some(y)) => (x, y),
                        _ => {
                            return Err(Error::IncompleteMatrix {
                                from: vertices[a].to_string(),
                                to: vertices[b].to_string(),
                            })
                        }
                    };
                    if ab < W::zero() || ba < W::zero() {
                        return Err(Error::Validation("weights must be non-negative".into()));
                    }
                }
            }
        }
        Ok(Self {
            vertices,
            arcs,
            weights,
        })
    }

    /// Sub-problem of `reduced` on `members`, taking weights from the
    /// full matrix.
    pub fn from_reduced(
        reduced: &Digraph,
        weights: &WeightMatrix<W>,
        members: &[usize],
    ) -> Result<Self> {
        let mut vertices = members.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        Self::new(
            vertices.clone(),
            reduced.induced(&vertices),
            weights.submatrix(&vertices),
        )
    }

    /// Problem on `0..n` oriented by the max rule, with tied pairs stripped.
    pub fn from_weights(weights: WeightMatrix<W>) -> Result<Self> {
        let n = weights.len();
        if let Some((i, j)) = weights.first_missing() {
            return Err(Error::IncompleteMatrix {
                from: i.to_string(),
                to: j.to_string(),
            });
        }
        let mut arcs = Digraph::new(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && weights.at(i, j) > weights.at(j, i) {
                    arcs.add_edge(i, j);
                }
            }
        }
        Self::new((0..n).collect(), arcs, weights)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Local arc set.
    pub fn arcs(&self) -> &Digraph {
        &self.arcs
    }

    pub(crate) fn local_index(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Local weight that placing `a` before `b` earns: the weight of
    /// `a -> b` when the pair carries an arc, zero for a stripped pair.
    pub(crate) fn local_gain(&self, a: usize, b: usize) -> W {
        if self.arcs.has_edge(a, b) || self.arcs.has_edge(b, a) {
            self.weights.at(a, b)
        } else {
            W::zero()
        }
    }

    /// Score of a total order given as vertex ids.
    pub fn score(&self, order: &[usize]) -> W {
        let local: Vec<usize> = order
            .iter()
            .map(|&v| self.local_index(v).expect("vertex outside problem"))
            .collect();
        let mut total = W::zero();
        for (i, &a) in local.iter().enumerate() {
            for &b in &local[i + 1..] {
                total = total + self.local_gain(a, b);
            }
        }
        total
    }

    /// Arcs `u -> v` (ids) that `order` places backwards.
    pub fn reversed_by(&self, order: &[usize]) -> BTreeSet<Arc> {
        let mut rank = vec![0usize; self.len()];
        for (r, &v) in order.iter().enumerate() {
            rank[self.local_index(v).expect("vertex outside problem")] = r;
        }
        self.arcs
            .edges()
            .filter(|&(a, b)| rank[b] < rank[a])
            .map(|(a, b)| (self.vertices[a], self.vertices[b]))
            .collect()
    }

    /// Builds the canonical solution for a reversal set: the smallest-first
    /// topological order of the acyclified component.
    pub fn solution_for(&self, reversed: BTreeSet<Arc>) -> Result<ReversalSolution<W>> {
        let mut g = self.arcs.clone();
        for &(u, v) in &reversed {
            let (a, b) = (
                self.local_index(u)
                    .ok_or_else(|| Error::UnknownVertex(u.to_string()))?,
                self.local_index(v)
                    .ok_or_else(|| Error::UnknownVertex(v.to_string()))?,
            );
            if !g.has_edge(a, b) {
                return Err(Error::Internal(format!("({u}, {v}) is not an arc")));
            }
            g.reverse_edge(a, b);
        }
        let local = g
            .topological_order()
            .ok_or_else(|| Error::Internal("reversal set leaves a cycle".into()))?;
        let order: Vec<usize> = local.into_iter().map(|a| self.vertices[a]).collect();
        let score = self.score(&order);
        Ok(ReversalSolution {
            reversed,
            order,
            score,
        })
    }
}

/// Acyclic orientation of one component.
///
/// `reversed` identifies the solution; `order` is one total order realising
/// it (the smallest-first topological order), and `score` the component's
/// total forward weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReversalSolution<W> {
    pub reversed: BTreeSet<Arc>,
    pub order: Vec<usize>,
    pub score: W,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn bidirected_problems_are_rejected() {
        let arcs = Digraph::from_edges(2, [(0, 1), (1, 0)]);
        let w = WeightMatrix::from_fn(2, |_, _| Rational::new(1, 2));
        assert!(SccProblem::new(vec![0, 1], arcs, w).is_err());
    }

    #[test]
    fn from_weights_strips_ties() {
        let w = WeightMatrix::from_fn(3, |i, j| match (i, j) {
            (0, 1) | (1, 0) => 5i64,
            (i, j) if i < j => 8,
            _ => 2,
        });
        let p = SccProblem::from_weights(w).unwrap();
        assert!(!p.arcs().has_edge(0, 1) && !p.arcs().has_edge(1, 0));
        assert_eq!(p.arcs().edge_count(), 2);
        // stripped pair contributes nothing either way
        assert_eq!(p.score(&[0, 1, 2]), 16);
        assert_eq!(p.score(&[1, 0, 2]), 16);
    }

    #[test]
    fn solution_for_rejects_non_arcs_and_cycles() {
        let w = WeightMatrix::from_fn(3, |i, j| if (j + 3 - i) % 3 == 1 { 9i64 } else { 1 });
        let p = SccProblem::from_weights(w).unwrap();
        assert!(p.solution_for(BTreeSet::new()).is_err());
        assert!(p.solution_for([(1, 0)].into()).is_err());
        let s = p.solution_for([(2, 0)].into()).unwrap();
        assert_eq!(s.order, vec![0, 1, 2]);
        assert_eq!(s.score, 9 + 9 + 1);
        assert_eq!(p.reversed_by(&s.order), s.reversed);
    }
}
