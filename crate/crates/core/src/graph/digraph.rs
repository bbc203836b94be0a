use std::collections::VecDeque;

/// Simple directed graph on `0..n` backed by an adjacency matrix.
///
/// The graphs handled here are dense (every pair of a semi-complete digraph
/// carries at least one arc), so a matrix is the natural representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self loops are not allowed");
        self.adj[u * self.n + v] = true;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] = false;
    }

    /// Replaces `u -> v` by `v -> u`.
    pub fn reverse_edge(&mut self, u: usize, v: usize) {
        debug_assert!(self.has_edge(u, v));
        self.remove_edge(u, v);
        self.add_edge(v, u);
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[u * self.n..(u + 1) * self.n];
        row.iter().enumerate().filter(|(_, &e)| e).map(|(v, _)| v)
    }

    /// All arcs in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.successors(u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    /// Whether a directed path `from ~> to` of length >= 1 exists.
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            for v in self.successors(u) {
                if v == to {
                    return true;
                }
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        false
    }

    /// Kahn's algorithm, always taking the smallest available vertex.
    /// `None` when the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.n];
        for (_, v) in self.edges() {
            indegree[v] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..self.n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(u) = ready.pop_first() {
            order.push(u);
            for v in self.successors(u) {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Induced subgraph on `keep`, renumbered in the order given.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut g = Digraph::new(keep.len());
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate() {
                if a != b && self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topological_order_prefers_small_indices() {
        let g = Digraph::from_edges(4, [(3, 1), (2, 1), (0, 1)]);
        assert_eq!(g.topological_order(), Some(vec![0, 2, 3, 1]));
    }

    #[test]
    fn cycle_has_no_topological_order() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert!(!g.is_acyclic());
        assert!(g.reaches(2, 1));
    }

    #[test]
    fn reaches_needs_a_path() {
        let g = Digraph::from_edges(3, [(0, 1)]);
        assert!(g.reaches(0, 1));
        assert!(!g.reaches(1, 0));
        assert!(!g.reaches(0, 2));
        assert!(!g.reaches(0, 0));
    }
}
