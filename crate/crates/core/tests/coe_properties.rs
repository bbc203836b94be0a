use lcos_core::graph::Digraph;
use lcos_core::metrics::{coe, descendant_graph, CoeMode, DescendantGraph, TrueDag};
use lcos_core::Rational;
use proptest::prelude::*;

/// Random DAG over `0..n` (edges only go from lower to higher labels) and a
/// random permutation of the labels.
fn dag_and_order() -> impl Strategy<Value = (TrueDag, Vec<String>)> {
    (2usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n * n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(move |(bits, perm)| {
                let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
                let mut g = Digraph::new(n);
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[u * n + v] {
                            g.add_edge(u, v);
                        }
                    }
                }
                let order = perm.iter().map(|&v| names[v].clone()).collect();
                (TrueDag::new(names, g).unwrap(), order)
            })
    })
}

fn reachable(g: &Digraph, u: usize, v: usize) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        for y in g.successors(x) {
            if y == v {
                return true;
            }
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

proptest! {
    #[test]
    fn closure_matches_reachability((dag, _) in dag_and_order()) {
        let d = descendant_graph(&dag);
        let n = dag.len();
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(d.edges.has_edge(u, v), u != v && reachable(dag.edges(), u, v));
            }
        }
    }

    #[test]
    fn zero_iff_order_refines_ancestry((dag, order) in dag_and_order()) {
        let d = descendant_graph(&dag);
        let v = coe(&d, &order, CoeMode::PerPair, false).unwrap();
        let rank = |name: &str| order.iter().position(|o| o == name).unwrap();
        let refines = d.edges.edges().all(|(a, b)| rank(&d.names[a]) < rank(&d.names[b]));
        prop_assert_eq!(v.raw == 0, refines);
        prop_assert!(v.raw <= d.edge_count());
        for mode in [CoeMode::PerPair, CoeMode::PerDescEdge] {
            let x = coe(&d, &order, mode, false).unwrap().normalized;
            prop_assert!(x >= Rational::from_integer(0) && x <= Rational::from_integer(1));
        }
    }

    #[test]
    fn only_descendant_edges_matter((dag, order) in dag_and_order()) {
        let d = descendant_graph(&dag);
        let base = coe(&d, &order, CoeMode::PerPair, false).unwrap().raw;
        // Swapping two adjacent unrelated vertices changes nothing.
        for k in 0..order.len() - 1 {
            let a = d.names.iter().position(|x| *x == order[k]).unwrap();
            let b = d.names.iter().position(|x| *x == order[k + 1]).unwrap();
            if !d.edges.has_edge(a, b) && !d.edges.has_edge(b, a) {
                let mut swapped = order.clone();
                swapped.swap(k, k + 1);
                prop_assert_eq!(coe(&d, &swapped, CoeMode::PerPair, false).unwrap().raw, base);
            }
        }
    }

    #[test]
    fn extra_descendant_edge_never_lowers_error((dag, order) in dag_and_order()) {
        let d = descendant_graph(&dag);
        let base = coe(&d, &order, CoeMode::PerPair, false).unwrap().raw;
        let n = dag.len();
        for u in 0..n {
            for v in u + 1..n {
                if !d.edges.has_edge(u, v) {
                    let mut edges = d.edges.clone();
                    edges.add_edge(u, v);
                    let bigger = DescendantGraph { names: d.names.clone(), edges };
                    prop_assert!(coe(&bigger, &order, CoeMode::PerPair, false).unwrap().raw >= base);
                }
            }
        }
    }
}
