//! Causal order error of discovered tournaments against a reference DAG.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::graph::Digraph;
use crate::tournament::OrderDistribution;
use crate::{Error, Rational, Result};

/// Reference causal graph; validated acyclic with unique names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrueDag {
    names: Vec<String>,
    edges: Digraph,
}

impl TrueDag {
    pub fn new(names: Vec<String>, edges: Digraph) -> Result<Self> {
        if edges.vertex_count() != names.len() {
            return Err(Error::Validation(format!(
                "{} names for a graph of {} vertices",
                names.len(),
                edges.vertex_count()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if n.trim().is_empty() || !seen.insert(n.as_str()) {
                return Err(Error::Validation(format!(
                    "bad or duplicate vertex name {n:?}"
                )));
            }
        }
        if !edges.is_acyclic() {
            return Err(Error::Validation("reference graph has a cycle".into()));
        }
        Ok(Self { names, edges })
    }

    pub fn from_named_edges(names: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let lookup = |n: &String| {
            index
                .get(n.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownVertex(n.clone()))
        };
        let mut g = Digraph::new(names.len());
        for (a, b) in edges {
            let (u, v) = (lookup(a)?, lookup(b)?);
            if u == v {
                return Err(Error::Validation(format!("self-loop on {a:?}")));
            }
            g.add_edge(u, v);
        }
        Self::new(names, g)
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

    pub fn edges(&self) -> &Digraph {
        &self.edges
    }

    /// Transitive closure: `u -> v` whenever `v` descends from `u`.
    pub fn descendants(&self) -> Digraph {
        let n = self.len();
        let order = self.edges.topological_order().expect("validated acyclic");
        let mut closure = Digraph::new(n);
        // Reverse topological order: successors' descendant sets are final.
        for &u in order.iter().rev() {
            for v in self.edges.successors(u).collect::<Vec<_>>() {
                closure.add_edge(u, v);
                for w in 0..n {
                    if closure.has_edge(v, w) {
                        closure.add_edge(u, w);
                    }
                }
            }
        }
        closure
    }
}

/// Every vertex joined to all of its descendants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendantGraph {
    pub names: Vec<String>,
    pub edges: Digraph,
}

impl DescendantGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.edge_count()
    }
}

pub fn descendant_graph(dag: &TrueDag) -> DescendantGraph {
    DescendantGraph {
        names: dag.names.clone(),
        edges: dag.descendants(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeMode {
    /// Errors divided by the vertex count; may exceed 1.
    PerVertex,
    /// Errors divided by the number of vertex pairs.
    #[default]
    PerPair,
    /// Errors divided by the number of descendant edges.
    PerDescEdge,
}

impl CoeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CoeMode::PerVertex => "per_vertex",
            CoeMode::PerPair => "per_pair",
            CoeMode::PerDescEdge => "per_desc_edge",
        }
    }
}

impl std::str::FromStr for CoeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_vertex" => Ok(CoeMode::PerVertex),
            "per_pair" => Ok(CoeMode::PerPair),
            "per_desc_edge" => Ok(CoeMode::PerDescEdge),
            other => Err(Error::Config(format!(
                "unknown COE normalization {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeValue {
    pub raw: usize,
    pub normalized: Rational,
}

/// Descendant edges not respected by `order`.
///
/// Vertices of `desc` missing from `order` were removed by the search. By
/// default every descendant edge touching one counts as an error and the
/// pair denominators use the full vertex count; `lenient` drops those edges
/// and normalizes over the ordered vertices only.
pub fn coe(
    desc: &DescendantGraph,
    order: &[String],
    mode: CoeMode,
    lenient: bool,
) -> Result<CoeValue> {
    let n = desc.names.len();
    let index: HashMap<&str, usize> = desc
        .names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut rank = vec![None; n];
    for (r, name) in order.iter().enumerate() {
        let &v = index.get(name.as_str()).ok_or_else(|| {
            Error::Validation(format!(
                "ordered vertex {name:?} is not in the reference graph"
            ))
        })?;
        if rank[v].replace(r).is_some() {
            return Err(Error::Validation(format!("vertex {name:?} ordered twice")));
        }
    }
    let mut raw = 0;
    let mut counted = 0;
    for (u, v) in desc.edges.edges() {
        match (rank[u], rank[v]) {
            (Some(a), Some(b)) => {
                counted += 1;
                raw += usize::from(a > b);
            }
            _ if lenient => {}
            _ => {
                counted += 1;
                raw += 1;
            }
        }
    }
    let size = if lenient { order.len() } else { n };
    let denom = match mode {
        CoeMode::PerVertex => size,
        CoeMode::PerPair => size * size.saturating_sub(1) / 2,
        CoeMode::PerDescEdge => counted,
    };
    let normalized = if denom == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(raw as i64, denom as i64)
    };
    Ok(CoeValue { raw, normalized })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeReport {
    pub mode: CoeMode,
    pub lenient: bool,
    /// One entry per distribution member, in distribution order.
    pub per_tournament: Vec<CoeValue>,
    pub best: Rational,
    pub average: Rational,
    /// Sample standard deviation; zero for a single member.
    pub std_dev: f64,
}

pub fn evaluate_distribution<W>(
    desc: &DescendantGraph,
    dist: &OrderDistribution<W>,
    mode: CoeMode,
    lenient: bool,
) -> Result<CoeReport> {
    if dist.tournaments.is_empty() {
        return Err(Error::Validation(
            "cannot evaluate an empty distribution".into(),
        ));
    }
    for name in dist.vertices.iter().chain(&dist.removed) {
        if !desc.names.contains(name) {
            return Err(Error::Validation(format!(
                "vertex {name:?} of the distribution is not in the reference graph"
            )));
        }
    }
    let per_tournament = dist
        .tournaments
        .iter()
        .map(|t| coe(desc, &t.names(&dist.vertices), mode, lenient))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Rational> = per_tournament.iter().map(|v| v.normalized).collect();
    let best = *values.iter().min().expect("non-empty");
    let count = values.len() as i64;
    let average = values.iter().copied().sum::<Rational>() / Rational::from_integer(count);
    let std_dev = if count < 2 {
        0.0
    } else {
        let ss: Rational = values.iter().map(|&v| (v - average) * (v - average)).sum();
        (ss / Rational::from_integer(count - 1))
            .to_f64()
            .unwrap_or(f64::NAN)
            .sqrt()
    };
    Ok(CoeReport {
        mode,
        lenient,
        per_tournament,
        best,
        average,
        std_dev,
    })
}

/// One results-table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub graph: String,
    pub best: f64,
    pub avg: f64,
    pub std: f64,
    pub n_orders: usize,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "E")]
    pub e: usize,
    pub normalization: CoeMode,
    pub lenient: bool,
    /// Exact `best` and `avg` as `p/q`.
    pub best_exact: String,
    pub avg_exact: String,
}

impl CoeReport {
    /// `vertex_count` is the size of the reference graph.
    pub fn to_json(&self, graph: &str, vertex_count: usize) -> ReportJson {
        let f = |r: Rational| r.to_f64().unwrap_or(f64::NAN);
        let exact = |r: Rational| format!("{}/{}", r.numer(), r.denom());
        ReportJson {
            graph: graph.to_string(),
            best: f(self.best),
            avg: f(self.average),
            std: self.std_dev,
            n_orders: self.per_tournament.len(),
            v: vertex_count,
            e: vertex_count * vertex_count.saturating_sub(1) / 2,
            normalization: self.mode,
            lenient: self.lenient,
            best_exact: exact(self.best),
            avg_exact: exact(self.average),
        }
    }

    /// `graph  best  avg ± std  n_orders  V  E`, the results-table layout.
    pub fn table_row(&self, graph: &str, vertex_count: usize) -> String {
        let j = self.to_json(graph, vertex_count);
        format!(
            "{:<16} best {:.3}  avg {:.3} ± {:.3}  orders {}  V {}  E {}",
            j.graph, j.best, j.avg, j.std, j.n_orders, j.v, j.e
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::AcyclicTournament;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn chain() -> DescendantGraph {
        let dag = TrueDag::from_named_edges(
            s(&["A", "B", "C"]),
            &[("A".into(), "B".into()), ("B".into(), "C".into())],
        )
        .unwrap();
        descendant_graph(&dag)
    }

    #[test]
    fn closure_of_chain() {
        let d = chain();
        let e: Vec<_> = d.edges.edges().collect();
        assert_eq!(e, vec![(0, 1), (0, 2), (1, 2)]);
        let empty = TrueDag::new(s(&["a", "b"]), Digraph::new(2)).unwrap();
        assert_eq!(descendant_graph(&empty).edge_count(), 0);
    }

    #[test]
    fn cyclic_reference_rejected() {
        let r = TrueDag::from_named_edges(
            s(&["a", "b"]),
            &[("a".into(), "b".into()), ("b".into(), "a".into())],
        );
        assert!(r.is_err());
    }

    #[test]
    fn reversed_chain_is_all_wrong() {
        let d = chain();
        let order = s(&["C", "B", "A"]);
        for mode in [CoeMode::PerVertex, CoeMode::PerPair, CoeMode::PerDescEdge] {
            let v = coe(&d, &order, mode, false).unwrap();
            assert_eq!(v.raw, 3);
            assert_eq!(v.normalized, Rational::from_integer(1));
        }
    }

    #[test]
    fn one_swap() {
        let v = coe(&chain(), &s(&["B", "A", "C"]), CoeMode::PerPair, false).unwrap();
        assert_eq!(v.raw, 1);
        assert_eq!(v.normalized, Rational::new(1, 3));
        let v = coe(&chain(), &s(&["A", "B", "C"]), CoeMode::PerPair, false).unwrap();
        assert_eq!(v.raw, 0);
    }

    #[test]
    fn removed_vertices_count_unless_lenient() {
        let d = chain();
        let order = s(&["A", "C"]);
        let strict = coe(&d, &order, CoeMode::PerPair, false).unwrap();
        assert_eq!(strict.raw, 2);
        assert_eq!(strict.normalized, Rational::new(2, 3));
        let lenient = coe(&d, &order, CoeMode::PerPair, true).unwrap();
        assert_eq!(lenient.raw, 0);
        let per_edge = coe(&d, &order, CoeMode::PerDescEdge, true).unwrap();
        assert_eq!(per_edge.normalized, Rational::from_integer(0));
        assert!(coe(&d, &s(&["A", "Q"]), CoeMode::PerPair, false).is_err());
    }

    #[test]
    fn distribution_statistics() {
        let d = chain();
        let dist = OrderDistribution {
            vertices: s(&["A", "B", "C"]),
            tournaments: vec![
                AcyclicTournament::new(vec![0, 1, 2]).unwrap(),
                AcyclicTournament::new(vec![2, 0, 1]).unwrap(),
            ],
            score: 0i64,
            removed: vec![],
        };
        let r = evaluate_distribution(&d, &dist, CoeMode::PerDescEdge, false).unwrap();
        assert_eq!(r.per_tournament[1].raw, 2);
        assert_eq!(r.best, Rational::from_integer(0));
        assert_eq!(r.average, Rational::new(1, 3));
        assert!((r.std_dev - (2.0f64 / 9.0).sqrt()).abs() < 1e-12);

        let single = OrderDistribution {
            tournaments: vec![AcyclicTournament::new(vec![0, 1, 2]).unwrap()],
            ..dist.clone()
        };
        let r = evaluate_distribution(&d, &single, CoeMode::PerPair, false).unwrap();
        assert_eq!(r.best, r.average);
        assert_eq!(r.std_dev, 0.0);

        let empty = OrderDistribution {
            tournaments: vec![],
            ..dist
        };
        assert!(evaluate_distribution(&d, &empty, CoeMode::PerPair, false).is_err());
    }
}
