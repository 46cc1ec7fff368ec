use std::collections::BTreeSet;

use crate::hash::Hasher;
use crate::hashcore::{Dag, Labeling};
use crate::schemes::{truncate, SchemeGraph};
use crate::vertex::VertexId;

/// Labels every vertex of the graph for `items.len()` bottom-up in
/// topological order. Sinks past the end of `items` get the empty payload.
pub fn full_relabel<S: SchemeGraph + ?Sized>(
    scheme: &S,
    items: &[Vec<u8>],
    hasher: &Hasher,
) -> Labeling {
    let n = items.len() as u64;
    let graph = truncate(scheme, n);
    let order = graph
        .topological_order()
        .expect("scheme graph must be acyclic");
    let mut labels = Labeling::new();
    for v in order.into_iter().rev() {
        let children = graph.out_neighbors(v);
        let label = if children.is_empty() {
            let payload: &[u8] = items
                .get((v.a as usize).wrapping_sub(1))
                .filter(|_| v.is_sink())
                .map(|p| p.as_slice())
                .unwrap_or(&[]);
            hasher.sink_label(payload)
        } else {
            hasher.inner_label(children.iter().map(|c| &labels[c]))
        };
        labels.insert(v, label);
    }
    labels
}

/// Every maximal path starting at `v`. Exponential; for tiny graphs only.
pub fn maximal_paths<G: Dag + ?Sized>(graph: &G, v: VertexId) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![v]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        let next = graph.out_neighbors(last);
        if next.is_empty() {
            out.push(path);
            continue;
        }
        for w in next {
            let mut p = path.clone();
            p.push(w);
            stack.push(p);
        }
    }
    out
}

/// Determination straight from the definition: every maximal path from `v`
/// meets `set`.
pub fn determines_by_enumeration<G: Dag + ?Sized>(
    graph: &G,
    set: &BTreeSet<VertexId>,
    v: VertexId,
) -> bool {
    maximal_paths(graph, v)
        .iter()
        .all(|p| p.iter().any(|w| set.contains(w)))
}
