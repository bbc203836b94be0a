use serde::{Deserialize, Serialize};

use crate::graph::Digraph;
use crate::{Error, Rational, Result, Weight};

/// Total order of vertices `0..n`, read as the complete acyclic orientation
/// in which `u -> v` iff `u` comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AcyclicTournament {
    order: Vec<usize>,
}

impl AcyclicTournament {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &v in &order {
            if v >= order.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Validation(format!(
                    "{order:?} is not a permutation of 0..{}",
                    order.len()
                )));
            }
        }
        Ok(Self { order })
    }

    /// Reads a complete acyclic orientation back into an order.
    pub fn from_digraph(g: &Digraph) -> Option<Self> {
        let n = g.vertex_count();
        let complete = (0..n).all(|u| (u + 1..n).all(|v| g.has_edge(u, v) != g.has_edge(v, u)));
        if !complete {
            return None;
        }
        g.topological_order().map(|order| Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `ranks()[v]` is the zero-based position of `v`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (r, &v) in self.order.iter().enumerate() {
            rank[v] = r;
        }
        rank
    }

    pub fn to_digraph(&self) -> Digraph {
        let mut g = Digraph::new(self.order.len());
        for (a, &u) in self.order.iter().enumerate() {
            for &v in &self.order[a + 1..] {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn names(&self, names: &[String]) -> Vec<String> {
        self.order.iter().map(|&v| names[v].clone()).collect()
    }
}

/// The maximally consistent orders, all sharing one score and weighted
/// uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderDistribution<W> {
    /// Vertices the orders range over, in matrix order.
    pub vertices: Vec<String>,
    /// Sorted by the name sequence of each order; no duplicates.
    pub tournaments: Vec<AcyclicTournament>,
    pub score: W,
    /// Non-informative vertices, in matrix order.
    pub removed: Vec<String>,
}

impl<W: Weight> OrderDistribution<W> {
    pub fn len(&self) -> usize {
        self.tournaments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tournaments.is_empty()
    }

    /// Uniform probability of each member.
    pub fn weight(&self) -> f64 {
        1.0 / self.tournaments.len() as f64
    }

    pub fn named_orders(&self) -> Vec<Vec<String>> {
        self.tournaments
            .iter()
            .map(|t| t.names(&self.vertices))
            .collect()
    }

    pub fn map_score<V: Weight>(self, f: impl FnOnce(W) -> V) -> OrderDistribution<V> {
        OrderDistribution {
            vertices: self.vertices,
            tournaments: self.tournaments,
            score: f(self.score),
            removed: self.removed,
        }
    }
}

/// File form of a distribution; the score is written as `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub score: String,
    pub removed: Vec<String>,
    pub tournaments: Vec<Vec<String>>,
    pub count: usize,
}

impl OrderDistribution<Rational> {
    pub fn to_json(&self) -> DistributionJson {
        DistributionJson {
            score: format!("{}/{}", self.score.numer(), self.score.denom()),
            removed: self.removed.clone(),
            tournaments: self.named_orders(),
            count: self.tournaments.len(),
        }
    }
}

impl DistributionJson {
    pub fn parse_score(&self) -> Result<Rational> {
        crate::consistency::parse_rational(&self.score)
    }

    pub fn to_pretty_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("distribution serializes");
        s.push('\n');
        s
    }

    /// Rebuilds the in-memory form. Vertices are taken in order of first
    /// appearance, so `vertices` may differ in order from the source matrix.
    pub fn to_distribution(&self) -> Result<OrderDistribution<Rational>> {
        let Some(first) = self.tournaments.first() else {
            return Err(Error::Validation("distribution has no tournaments".into()));
        };
        let vertices = first.clone();
        let tournaments = self
            .tournaments
            .iter()
            .map(|names| {
                let order = names
                    .iter()
                    .map(|n| {
                        vertices
                            .iter()
                            .position(|v| v == n)
                            .ok_or_else(|| Error::UnknownVertex(n.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if order.len() != vertices.len() {
                    return Err(Error::Validation(
                        "tournaments over different vertex sets".into(),
                    ));
                }
                AcyclicTournament::new(order)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrderDistribution {
            vertices,
            tournaments,
            score: self.parse_score()?,
            removed: self.removed.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(AcyclicTournament::new(vec![0, 0]).is_err());
        assert!(AcyclicTournament::new(vec![0, 2]).is_err());
        assert!(AcyclicTournament::new(vec![1, 0]).is_ok());
    }

    #[test]
    fn digraph_round_trip() {
        let t = AcyclicTournament::new(vec![2, 0, 3, 1]).unwrap();
        let g = t.to_digraph();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(AcyclicTournament::from_digraph(&g), Some(t.clone()));
        assert_eq!(t.ranks(), vec![1, 3, 0, 2]);
        let mut partial = g.clone();
        partial.remove_edge(2, 0);
        assert_eq!(AcyclicTournament::from_digraph(&partial), None);
    }

    #[test]
    fn json_score_is_a_fraction() {
        let d = OrderDistribution {
            vertices: vec!["a".into(), "b".into()],
            tournaments: vec![AcyclicTournament::new(vec![1, 0]).unwrap()],
            score: Rational::new(9, 2),
            removed: vec![],
        };
        let j = d.to_json();
        assert_eq!(j.score, "9/2");
        assert_eq!(j.tournaments, vec![vec!["b".to_string(), "a".to_string()]]);
        let back = j.to_distribution().unwrap();
        assert_eq!(back.named_orders(), d.named_orders());
        assert_eq!(back.score, d.score);
    }
}
