use std::collections::BTreeSet;

use super::AcyclicTournament;
use crate::graph::{Digraph, SccPartition, SemiCompleteDigraph};
use crate::mtr::ReversalSolution;
use crate::{Error, Result, Weight};

/// The arc set without bidirected pairs, and those pairs `(i, j)`, `i < j`.
pub fn strip_bidirected<W: Weight>(g: &SemiCompleteDigraph<W>) -> (Digraph, Vec<(usize, usize)>) {
    g.strip_bidirected()
}

/// Cartesian product of per-component choices.
///
/// `scc_solutions[c]` holds the optimal solutions of component `c` of `p`;
/// singleton components may have an empty list. Each skeleton is `reduced`
/// with the chosen reversals applied inside every component.
pub fn compose<W: Weight>(
    scc_solutions: &[Vec<ReversalSolution<W>>],
    reduced: &Digraph,
    p: &SccPartition,
) -> Result<Vec<Digraph>> {
    if scc_solutions.len() != p.len() {
        return Err(Error::Internal(format!(
            "{} solution sets for {} components",
            scc_solutions.len(),
            p.len()
        )));
    }
    let mut skeletons = vec![reduced.clone()];
    for (c, solutions) in scc_solutions.iter().enumerate() {
        if p.components[c].len() < 2 {
            continue;
        }
        if solutions.is_empty() {
            return Err(Error::Internal(format!(
                "component {c} has no optimal solution"
            )));
        }
        let mut next = Vec::with_capacity(skeletons.len() * solutions.len());
        for skeleton in &skeletons {
            for solution in solutions {
                let mut g = skeleton.clone();
                for &(u, v) in &solution.reversed {
                    if !g.has_edge(u, v) {
                        return Err(Error::Internal(format!("reversed arc ({u}, {v}) missing")));
                    }
                    g.reverse_edge(u, v);
                }
                next.push(g);
            }
        }
        skeletons = next;
    }
    Ok(skeletons)
}

/// Orients the stripped pairs of an acyclic skeleton in every way that keeps
/// it acyclic.
///
/// Pairs are handled in the order given. A pair already connected by a path
/// follows that path; an unconnected pair branches into both orientations.
/// The returned tournaments are sorted and distinct.
pub fn reintroduce_bidirected(
    skeleton: &Digraph,
    stripped: &[(usize, usize)],
) -> Result<Vec<AcyclicTournament>> {
    if !skeleton.is_acyclic() {
        return Err(Error::Internal("skeleton has a cycle".into()));
    }
    let mut out = BTreeSet::new();
    let mut g = skeleton.clone();
    branch(&mut g, stripped, &mut out)?;
    Ok(out.into_iter().collect())
}

fn branch(
    g: &mut Digraph,
    pairs: &[(usize, usize)],
    out: &mut BTreeSet<AcyclicTournament>,
) -> Result<()> {
    let Some((&(u, v), rest)) = pairs.split_first() else {
        let t = AcyclicTournament::from_digraph(g).ok_or_else(|| {
            Error::Internal("oriented skeleton is not a complete acyclic tournament".into())
        })?;
        out.insert(t);
        return Ok(());
    };
    let forward = g.reaches(u, v);
    let backward = g.reaches(v, u);
    assert!(
        !(forward && backward),
        "acyclic skeleton has paths both ways between {u} and {v}"
    );
    let options: &[(usize, usize)] = match (forward, backward) {
        (true, _) => &[(u, v)],
        (_, true) => &[(v, u)],
        _ => &[(u, v), (v, u)],
    };
    for &(a, b) in options {
        g.add_edge(a, b);
        branch(g, rest, out)?;
        g.remove_edge(a, b);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::scc_decompose;
    use std::collections::BTreeSet;

    const W: usize = 0;
    const X: usize = 1;
    const Y: usize = 2;
    const Z: usize = 3;

    #[test]
    fn free_pair_branches_both_ways() {
        // Z->W, Z->X, Z->Y, W->Y, X->Y with {W, X} stripped
        let skeleton = Digraph::from_edges(4, [(Z, W), (Z, X), (Z, Y), (W, Y), (X, Y)]);
        let ts = reintroduce_bidirected(&skeleton, &[(W, X)]).unwrap();
        let orders: Vec<_> = ts.iter().map(|t| t.order().to_vec()).collect();
        assert_eq!(orders, vec![vec![Z, W, X, Y], vec![Z, X, W, Y]]);
    }

    #[test]
    fn existing_path_forces_orientation() {
        // X reaches W through Y, so {W, X} can only be X -> W.
        let skeleton = Digraph::from_edges(4, [(Z, W), (Z, X), (Z, Y), (Y, W), (X, Y)]);
        let ts = reintroduce_bidirected(&skeleton, &[(W, X)]).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].order(), &[Z, X, Y, W]);
    }

    #[test]
    fn no_stripped_pairs_gives_the_skeleton_itself() {
        let skeleton = Digraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let ts = reintroduce_bidirected(&skeleton, &[]).unwrap();
        assert_eq!(ts, vec![AcyclicTournament::new(vec![0, 1, 2]).unwrap()]);
    }

    #[test]
    fn all_pairs_stripped_gives_every_order() {
        let ts = reintroduce_bidirected(&Digraph::new(3), &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(ts.len(), 6);
    }

    #[test]
    fn processing_order_does_not_matter() {
        let skeleton = Digraph::from_edges(5, [(0, 1), (2, 3)]);
        let mut pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .filter(|&(i, j)| !skeleton.has_edge(i, j) && !skeleton.has_edge(j, i))
            .collect();
        let a: BTreeSet<_> = reintroduce_bidirected(&skeleton, &pairs)
            .unwrap()
            .into_iter()
            .collect();
        pairs.reverse();
        let b: BTreeSet<_> = reintroduce_bidirected(&skeleton, &pairs)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(a, b);
        // 5!/(2*2) linear extensions of two disjoint chains plus a free vertex
        assert_eq!(a.len(), 30);
    }

    #[test]
    fn product_of_component_choices() {
        // two 3-cycles joined by 0 -> 3
        let reduced =
            Digraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)]);
        let p = scc_decompose(&reduced);
        assert_eq!(p.len(), 2);
        let sol = |arc: (usize, usize)| ReversalSolution {
            reversed: [arc].into(),
            order: vec![],
            score: 0i64,
        };
        let mut sets = vec![Vec::new(); 2];
        sets[p.component_of[0]] = vec![sol((2, 0)), sol((0, 1))];
        sets[p.component_of[3]] = vec![sol((5, 3)), sol((3, 4)), sol((4, 5))];
        let skeletons = compose(&sets, &reduced, &p).unwrap();
        assert_eq!(skeletons.len(), 6);
        assert!(skeletons.iter().all(|g| g.is_acyclic() && g.has_edge(0, 3)));
        let distinct: BTreeSet<_> = skeletons.iter().map(|g| format!("{g:?}")).collect();
        assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn all_singletons_compose_to_the_input() {
        let reduced = Digraph::from_edges(3, [(0, 1), (1, 2)]);
        let p = scc_decompose(&reduced);
        let skeletons = compose::<i64>(&vec![Vec::new(); 3], &reduced, &p).unwrap();
        assert_eq!(skeletons, vec![reduced]);
    }

    #[test]
    fn missing_solutions_are_a_contract_violation() {
        let reduced = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        let p = scc_decompose(&reduced);
        assert!(matches!(
            compose::<i64>(&[Vec::new()], &reduced, &p),
            Err(Error::Internal(_))
        ));
    }
}
