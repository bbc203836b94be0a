//! Graphviz DOT writers.

use std::fmt::Write;

use super::{ComponentGraph, SemiCompleteDigraph};
use crate::Weight;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Bidirected pairs are drawn as two arcs.
pub fn semicomplete_to_dot<W: Weight>(g: &SemiCompleteDigraph<W>) -> String {
    let mut out = String::from("digraph semicomplete {\n");
    for name in g.names() {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for (u, v) in g.arcs().edges() {
        let bidirected = g.arcs().has_edge(v, u);
        let _ = writeln!(
            out,
            "  {} -> {}{};",
            quote(&g.names()[u]),
            quote(&g.names()[v]),
            if bidirected { " [color=red]" } else { "" }
        );
    }
    out.push_str("}\n");
    out
}

pub fn component_graph_to_dot(cg: &ComponentGraph, names: &[String]) -> String {
    let mut out = String::from("digraph components {\n");
    for (c, members) in cg.components.iter().enumerate() {
        let label: Vec<&str> = members.iter().map(|&v| names[v].as_str()).collect();
        let _ = writeln!(out, "  c{c} [label={}];", quote(&label.join(", ")));
    }
    for (a, b) in cg.edges.edges() {
        let _ = writeln!(out, "  c{a} -> c{b};");
    }
    out.push_str("}\n");
    out
}

/// Acyclic tournament of a total order: an arc from each vertex to every
/// later one.
pub fn order_to_dot(order: &[String]) -> String {
    let mut out = String::from("digraph tournament {\n");
    for name in order {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for (a, u) in order.iter().enumerate() {
        for v in &order[a + 1..] {
            let _ = writeln!(out, "  {} -> {};", quote(u), quote(v));
        }
    }
    out.push_str("}\n");
    out
}
