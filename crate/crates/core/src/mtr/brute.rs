use std::collections::BTreeSet;

use super::{ReversalSolution, SccProblem};
use crate::{Error, Result, Weight, WeightMatrix};

/// Largest problem the exhaustive oracle accepts (8! orders).
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Calls `f` on every permutation of `items` (Heap's algorithm).
pub fn for_each_permutation(items: &[usize], mut f: impl FnMut(&[usize])) {
    let mut a = items.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Every maximal-score order of `vertices` under `weights`, where an order
/// scores the sum of `w(u -> v)` over pairs with `u` first. Orders are
/// returned sorted.
pub fn brute_force_orders<W: Weight>(
    weights: &WeightMatrix<W>,
    vertices: &[usize],
) -> Result<(W, Vec<Vec<usize>>)> {
    if vertices.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::Config(format!(
            "brute force refused for {} vertices (limit {BRUTE_FORCE_LIMIT})",
            vertices.len()
        )));
    }
    let mut best: Option<W> = None;
    let mut orders: Vec<Vec<usize>> = Vec::new();
    for_each_permutation(vertices, |perm| {
        let score = weights.order_score(perm);
        match best {
            Some(b) if score < b => {}
            Some(b) if score == b => orders.push(perm.to_vec()),
            _ => {
                best = Some(score);
                orders.clear();
                orders.push(perm.to_vec());
            }
        }
    });
    orders.sort();
    Ok((best.unwrap_or_else(W::zero), orders))
}

/// Exhaustive reference for the component solvers: scores all `|V|!`
/// orders and groups the maximal ones by reversal set.
pub fn brute_force_optimal<W: Weight>(p: &SccProblem<W>) -> Result<Vec<ReversalSolution<W>>> {
    if p.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::Config(format!(
            "brute force refused for {} vertices (limit {BRUTE_FORCE_LIMIT})",
            p.len()
        )));
    }
    let mut best: Option<W> = None;
    let mut reversals: BTreeSet<BTreeSet<super::Arc>> = BTreeSet::new();
    for_each_permutation(p.vertices(), |perm| {
        let score = p.score(perm);
        match best {
            Some(b) if score < b => {}
            Some(b) if score == b => {
                reversals.insert(p.reversed_by(perm));
            }
            _ => {
                best = Some(score);
                reversals.clear();
                reversals.insert(p.reversed_by(perm));
            }
        }
    });
    reversals.into_iter().map(|r| p.solution_for(r)).collect()
}
