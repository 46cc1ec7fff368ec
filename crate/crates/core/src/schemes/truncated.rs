//! Finite materializations: the union of everything reachable from the
//! first `n` commit vertices.

use std::collections::HashSet;

use crate::hashcore::{Dag, ExplicitDag};
use crate::vertex::VertexId;

use super::{check_len, SchemeGraph, SchemeId};

/// The finite graph of a scheme for sequences of length `n`. Grows one
/// length at a time and remembers the size of the last step.
#[derive(Debug, Clone)]
pub struct TruncatedGraph {
    scheme: SchemeId,
    n: u64,
    dag: ExplicitDag,
    expanded: HashSet<VertexId>,
    commits: Vec<VertexId>,
    vertex_delta: usize,
    edge_delta: usize,
}

impl TruncatedGraph {
    /// The empty graph for length 0.
    pub fn empty(scheme: SchemeId) -> Self {
        TruncatedGraph {
            scheme,
            n: 0,
            dag: ExplicitDag::new(),
            expanded: HashSet::new(),
            commits: Vec::new(),
            vertex_delta: 0,
            edge_delta: 0,
        }
    }

    /// Wraps an explicitly built graph, e.g. a reference construction.
    pub fn from_dag(scheme: SchemeId, n: u64, dag: ExplicitDag, commits: Vec<VertexId>) -> Self {
        let expanded = dag.vertices().collect();
        TruncatedGraph {
            scheme,
            n,
            dag,
            expanded,
            commits,
            vertex_delta: 0,
            edge_delta: 0,
        }
    }

    /// Adds everything reachable from `gcommit(n + 1)`.
    pub fn grow<S: SchemeGraph + ?Sized>(&mut self, scheme: &S) {
        let (v0, e0) = (self.dag.vertex_count(), self.dag.edge_count());
        self.n += 1;
        let commit = scheme.gcommit(self.n);
        self.commits.push(commit);
        self.dag.add_vertex(commit);
        let mut stack = vec![commit];
        while let Some(v) = stack.pop() {
            if !self.expanded.insert(v) {
                continue;
            }
            for w in scheme.out_neighbors(v) {
                self.dag.add_edge(v, w);
                if !self.expanded.contains(&w) {
                    stack.push(w);
                }
            }
        }
        self.vertex_delta = self.dag.vertex_count() - v0;
        self.edge_delta = self.dag.edge_count() - e0;
    }

    pub fn grow_to<S: SchemeGraph + ?Sized>(&mut self, scheme: &S, n: u64) {
        while self.n < n {
            self.grow(scheme);
        }
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dag(&self) -> &ExplicitDag {
        &self.dag
    }

    pub fn commits(&self) -> &[VertexId] {
        &self.commits
    }

    pub fn vertex_count(&self) -> usize {
        self.dag.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.dag.edge_count()
    }

    /// Vertices added by the last growth step.
    pub fn vertex_delta(&self) -> usize {
        self.vertex_delta
    }

    /// Edges added by the last growth step.
    pub fn edge_delta(&self) -> usize {
        self.edge_delta
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.dag.contains(v)
    }

    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        self.dag.topological_order()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

impl Dag for TruncatedGraph {
    fn contains(&self, v: VertexId) -> bool {
        self.dag.contains(v)
    }

    fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.dag.out_neighbors(v)
    }
}

/// Materializes the graph of a scheme for length `n`.
pub fn truncate<S: SchemeGraph + ?Sized>(scheme: &S, n: u64) -> TruncatedGraph {
    check_len(n);
    let mut t = TruncatedGraph::empty(scheme.id());
    t.grow_to(scheme, n);
    t
}
