//! Graphviz export.

use std::fmt::Write;

use crate::vertex::VertexKind;

use super::{truncate, SchemeGraph};

/// Renders the graph of `scheme` for length `n` in DOT. Sinks are boxes,
/// commit vertices are filled, and the commit vertex of `n` stands out.
pub fn to_dot<S: SchemeGraph + ?Sized>(scheme: &S, n: u64) -> String {
    let t = truncate(scheme, n);
    let last = scheme.gcommit(n);
    let mut out = String::new();
    writeln!(out, "digraph \"{}_{}\" {{", scheme.name(), n).unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=ellipse, fontname=\"Helvetica\"];").unwrap();
    for v in t.dag().vertices() {
        let mut attrs = Vec::new();
        if v.kind == VertexKind::Sink {
            attrs.push("shape=box".to_string());
        }
        if v == last {
            attrs.push("style=filled, fillcolor=gold".to_string());
        } else if t.commits().contains(&v) {
            attrs.push("style=filled, fillcolor=lightgrey".to_string());
        }
        if attrs.is_empty() {
            writeln!(out, "  \"{v}\";").unwrap();
        } else {
            writeln!(out, "  \"{v}\" [{}];", attrs.join(", ")).unwrap();
        }
    }
    for (u, v) in t.dag().edges() {
        writeln!(out, "  \"{u}\" -> \"{v}\";").unwrap();
    }
    out.push_str("}\n");
    out
}
