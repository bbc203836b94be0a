use std::collections::BTreeSet;

use super::{scc_decompose, Digraph};
use crate::{Error, Result, Weight, WeightMatrix};

/// Orientation of an unordered pair `{i, j}` read from `i`'s side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `i -> j` only.
    Forward,
    /// `j -> i` only.
    Backward,
    /// Both arcs: equal consistency in the two directions.
    Bidirected,
}

/// Maximally consistent semi-complete digraph.
///
/// Every pair keeps the arc of higher consistency; a tie keeps both. The
/// source weights travel with the graph so later stages can score orders.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiCompleteDigraph<W> {
    names: Vec<String>,
    weights: WeightMatrix<W>,
    arcs: Digraph,
}

impl<W: Weight> SemiCompleteDigraph<W> {
    /// Applies the max rule to every pair of a complete weight matrix.
    pub fn build(names: Vec<String>, weights: WeightMatrix<W>) -> Result<Self> {
        if names.len() != weights.len() {
            return Err(Error::Validation(format!(
                "{} names for a {}x{} matrix",
                names.len(),
                weights.len(),
                weights.len()
            )));
        }
        if let Some((i, j)) = weights.first_missing() {
            return Err(Error::IncompleteMatrix {
                from: names[i].clone(),
                to: names[j].clone(),
            });
        }
        let n = names.len();
        let mut arcs = Digraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                let (ij, ji) = (weights.at(i, j), weights.at(j, i));
                if ij >= ji {
                    arcs.add_edge(i, j);
                }
                if ji >= ij {
                    arcs.add_edge(j, i);
                }
            }
        }
        Ok(Self {
            names,
            weights,
            arcs,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &WeightMatrix<W> {
        &self.weights
    }

    /// All arcs, with bidirected pairs present in both directions.
    pub fn arcs(&self) -> &Digraph {
        &self.arcs
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn orientation(&self, i: usize, j: usize) -> Orientation {
        match (self.arcs.has_edge(i, j), self.arcs.has_edge(j, i)) {
            (true, true) => Orientation::Bidirected,
            (true, false) => Orientation::Forward,
            (false, true) => Orientation::Backward,
            (false, false) => unreachable!("semi-complete digraph lost pair ({i}, {j})"),
        }
    }

    /// Bidirected pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn bidirected_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.orientation(i, j) == Orientation::Bidirected)
            .collect()
    }

    /// Vertices bidirected with every other vertex.
    ///
    /// In a graph with fewer than two vertices no vertex qualifies: there is
    /// no pair to be bidirected with.
    pub fn non_informative_vertices(&self) -> Vec<usize> {
        let n = self.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .filter(|&v| {
                (0..n).all(|u| u == v || self.orientation(v, u) == Orientation::Bidirected)
            })
            .collect()
    }

    /// Induced subgraph without `drop`; orientations are unchanged.
    pub fn remove_vertices(&self, drop: &[usize]) -> Result<Self> {
        if let Some(&bad) = drop.iter().find(|&&v| v >= self.len()) {
            return Err(Error::UnknownVertex(format!("#{bad}")));
        }
        let drop: BTreeSet<usize> = drop.iter().copied().collect();
        let keep: Vec<usize> = (0..self.len()).filter(|v| !drop.contains(v)).collect();
        Ok(Self {
            names: keep.iter().map(|&v| self.names[v].clone()).collect(),
            weights: self.weights.submatrix(&keep),
            arcs: self.arcs.induced(&keep),
        })
    }

    pub fn remove_named(&self, drop: &[&str]) -> Result<Self> {
        let idx = drop
            .iter()
            .map(|name| {
                self.index_of(name)
                    .ok_or_else(|| Error::UnknownVertex(name.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.remove_vertices(&idx)
    }

    /// Removes non-informative vertices. With `fixpoint` the removal is
    /// repeated until no vertex qualifies; otherwise it runs once.
    /// Returns the pruned graph and the removed names in original order.
    pub fn prune_non_informative(&self, fixpoint: bool) -> (Self, Vec<String>) {
        let mut g = self.clone();
        let mut removed = BTreeSet::new();
        loop {
            let drop = g.non_informative_vertices();
            if drop.is_empty() {
                break;
            }
            removed.extend(drop.iter().map(|&v| g.names[v].clone()));
            g = g
                .remove_vertices(&drop)
                .expect("indices come from the graph");
            if !fixpoint {
                break;
            }
        }
        let removed = self
            .names
            .iter()
            .filter(|n| removed.contains(*n))
            .cloned()
            .collect();
        (g, removed)
    }

    /// Copy of the arc set with every bidirected pair deleted, plus the
    /// deleted pairs.
    pub fn strip_bidirected(&self) -> (Digraph, Vec<(usize, usize)>) {
        let pairs = self.bidirected_pairs();
        let mut reduced = self.arcs.clone();
        for &(i, j) in &pairs {
            reduced.remove_edge(i, j);
            reduced.remove_edge(j, i);
        }
        (reduced, pairs)
    }
}

/// Whether the total order `order` (vertex indices of `g`) can be obtained
/// from `g` by reorienting pairs inside its strongly connected components
/// only.
pub fn is_compatible<W: Weight>(order: &[usize], g: &SemiCompleteDigraph<W>) -> Result<bool> {
    let n = g.len();
    let mut rank = vec![usize::MAX; n];
    for (r, &v) in order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(Error::Validation(
                "tournament and graph have different vertex sets".into(),
            ));
        }
        rank[v] = r;
    }
    if order.len() != n {
        return Err(Error::Validation(
            "tournament and graph have different vertex sets".into(),
        ));
    }
    let partition = scc_decompose(g.arcs());
    for i in 0..n {
        for j in i + 1..n {
            if partition.component_of[i] == partition.component_of[j] {
                continue;
            }
            let orientation = g.orientation(i, j);
            assert_ne!(
                orientation,
                Orientation::Bidirected,
                "bidirected pair split across components"
            );
            let forward_in_order = rank[i] < rank[j];
            if forward_in_order != (orientation == Orientation::Forward) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
