use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Digraph;

/// Strongly connected components of a digraph.
///
/// Components are listed in topological order of the condensation (a
/// component comes before every component it has arcs into) and the
/// vertices inside each component are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.component_of[u] == self.component_of[v]
    }

    pub fn dump(&self, names: &[String]) -> SccDump {
        SccDump {
            components: self
                .components
                .iter()
                .map(|c| c.iter().map(|&v| names[v].clone()).collect())
                .collect(),
            component_of: self
                .component_of
                .iter()
                .enumerate()
                .map(|(v, &c)| (names[v].clone(), c))
                .collect(),
        }
    }
}

/// JSON form of a partition, keyed by vertex name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SccDump {
    pub components: Vec<Vec<String>>,
    pub component_of: BTreeMap<String, usize>,
}

/// Tarjan's algorithm with an explicit call stack.
pub fn scc_decompose(g: &Digraph) -> SccPartition {
    const UNVISITED: usize = usize::MAX;
    let n = g.vertex_count();
    let succ: Vec<Vec<usize>> = (0..n).map(|u| g.successors(u).collect()).collect();

    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    // Tarjan finishes sink components first.
    let mut finished: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (vertex, position in its successor list)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if let Some(&v) = succ[u].get(*pos) {
                *pos += 1;
                if index[v] == UNVISITED {
                    index[v] = next_index;
                    lowlink[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    lowlink[u] = lowlink[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[u]);
            }
            if lowlink[u] == index[u] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == u {
                        break;
                    }
                }
                component.sort_unstable();
                finished.push(component);
            }
        }
    }

    finished.reverse();
    let mut component_of = vec![0; n];
    for (c, members) in finished.iter().enumerate() {
        for &v in members {
            component_of[v] = c;
        }
    }
    SccPartition {
        components: finished,
        component_of,
    }
}

/// Condensation of a digraph: one node per component, an arc `a -> b`
/// whenever some arc leaves component `a` for component `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGraph {
    pub components: Vec<Vec<usize>>,
    pub edges: Digraph,
}

impl ComponentGraph {
    /// The topological order of the components when it is unique, which is
    /// the case exactly when consecutive components are joined by an arc.
    pub fn unique_topological_order(&self) -> Option<Vec<usize>> {
        let order = self.edges.topological_order()?;
        order
            .windows(2)
            .all(|w| self.edges.has_edge(w[0], w[1]))
            .then_some(order)
    }

    /// Whether every pair of components is joined by exactly one arc.
    pub fn is_tournament(&self) -> bool {
        let k = self.components.len();
        (0..k).all(|a| (a + 1..k).all(|b| self.edges.has_edge(a, b) != self.edges.has_edge(b, a)))
    }
}

pub fn condense(g: &Digraph, p: &SccPartition) -> ComponentGraph {
    let mut edges = Digraph::new(p.len());
    for (u, v) in g.edges() {
        let (a, b) = (p.component_of[u], p.component_of[v]);
        if a != b {
            edges.add_edge(a, b);
        }
    }
    ComponentGraph {
        components: p.components.clone(),
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Four-vertex shapes, labelled W=0, X=1, Y=2, Z=3.
    const W: usize = 0;
    const X: usize = 1;
    const Y: usize = 2;
    const Z: usize = 3;

    #[test]
    fn single_component_when_everything_cycles() {
        // Z->W, Y->Z, Z->X, X->Y, W->Y, W<->X
        let g = Digraph::from_edges(4, [(Z, W), (Y, Z), (Z, X), (X, Y), (W, Y), (W, X), (X, W)]);
        let p = scc_decompose(&g);
        assert_eq!(p.components, vec![vec![W, X, Y, Z]]);
    }

    #[test]
    fn bidirected_pair_forms_its_own_component() {
        // Z->W, Z->Y, Z->X, X->Y, W->Y, W<->X
        let g = Digraph::from_edges(4, [(Z, W), (Z, Y), (Z, X), (X, Y), (W, Y), (W, X), (X, W)]);
        let p = scc_decompose(&g);
        assert_eq!(p.components, vec![vec![Z], vec![W, X], vec![Y]]);
        let cg = condense(&g, &p);
        assert!(cg.is_tournament());
        assert_eq!(cg.unique_topological_order(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn acyclic_tournament_gives_singletons() {
        // Z->W, Z->Y, Z->X, X->Y, W->Y, X->W
        let g = Digraph::from_edges(4, [(Z, W), (Z, Y), (Z, X), (X, Y), (W, Y), (X, W)]);
        let p = scc_decompose(&g);
        assert_eq!(p.components, vec![vec![Z], vec![X], vec![W], vec![Y]]);
        let cg = condense(&g, &p);
        assert_eq!(cg.edges.edge_count(), g.edge_count());
    }

    #[test]
    fn component_graph_of_two_sources_into_one() {
        // sigma_2 = {a,b} cycle feeding sigma_1 = {c} and sigma_3 = {d,e}
        let g = Digraph::from_edges(5, [(0, 1), (1, 0), (0, 2), (1, 3), (3, 4), (4, 3)]);
        let p = scc_decompose(&g);
        let cg = condense(&g, &p);
        let src = p.component_of[0];
        assert!(cg.edges.has_edge(src, p.component_of[2]));
        assert!(cg.edges.has_edge(src, p.component_of[3]));
        assert_eq!(cg.edges.edge_count(), 2);
        assert!(cg.edges.is_acyclic());
        assert_eq!(cg.unique_topological_order(), None);
    }

    #[test]
    fn long_cycle_uses_explicit_stack() {
        let m = 2_000;
        let g = Digraph::from_edges(m, (0..m - 1).map(|i| (i, i + 1)).chain([(m - 1, 0)]));
        assert_eq!(scc_decompose(&g).len(), 1);
    }
}
