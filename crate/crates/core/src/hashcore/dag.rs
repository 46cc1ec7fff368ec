use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::vertex::VertexId;

use super::MerkleError;

/// A (possibly infinite) directed graph explored through out-neighborhoods.
///
/// `out_neighbors` must return each neighbor once, in canonical order, and
/// is only consulted for vertices for which `contains` holds.
pub trait Dag {
    fn contains(&self, v: VertexId) -> bool;
    fn out_neighbors(&self, v: VertexId) -> Vec<VertexId>;

    fn is_sink(&self, v: VertexId) -> bool {
        self.out_neighbors(v).is_empty()
    }

    fn has_edge(&self, from: VertexId, to: VertexId) -> bool {
        self.contains(from) && self.out_neighbors(from).binary_search(&to).is_ok()
    }
}

impl<T: Dag + ?Sized> Dag for &T {
    fn contains(&self, v: VertexId) -> bool {
        (**self).contains(v)
    }
    fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        (**self).out_neighbors(v)
    }
}

/// A finite graph given by its adjacency lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplicitDag {
    adjacency: BTreeMap<VertexId, Vec<VertexId>>,
}

impl ExplicitDag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Self::new();
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adjacency.entry(v).or_default();
    }

    pub fn add_edge(&mut self, from: VertexId, to: VertexId) {
        self.add_vertex(to);
        let out = self.adjacency.entry(from).or_default();
        if let Err(pos) = out.binary_search(&to) {
            out.insert(pos, to);
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(u, out)| out.iter().map(move |v| (*u, *v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum()
    }

    /// Kahn's algorithm; returns vertices with every edge pointing from an
    /// earlier to a later position, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let mut indegree: HashMap<VertexId, usize> =
            self.adjacency.keys().map(|v| (*v, 0)).collect();
        for (_, v) in self.edges() {
            *indegree.get_mut(&v).expect("edge target is a vertex") += 1;
        }
        let mut queue: VecDeque<VertexId> = self
            .adjacency
            .keys()
            .filter(|v| indegree[v] == 0)
            .copied()
            .collect();
        let mut order = Vec::with_capacity(self.adjacency.len());
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for v in &self.adjacency[&u] {
                let d = indegree.get_mut(v).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push_back(*v);
                }
            }
        }
        (order.len() == self.adjacency.len()).then_some(order)
    }
}

impl Dag for ExplicitDag {
    fn contains(&self, v: VertexId) -> bool {
        self.adjacency.contains_key(&v)
    }

    fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.adjacency.get(&v).cloned().unwrap_or_default()
    }
}

/// All vertices reachable from `roots` (including the roots).
pub fn reach<G: Dag + ?Sized>(graph: &G, roots: &[VertexId]) -> BTreeSet<VertexId> {
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut stack: Vec<VertexId> = roots.to_vec();
    while let Some(v) = stack.pop() {
        if seen.insert(v) {
            stack.extend(
                graph
                    .out_neighbors(v)
                    .into_iter()
                    .filter(|w| !seen.contains(w)),
            );
        }
    }
    seen
}

/// A family of paths sharing a common first vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathFamily {
    root: VertexId,
    paths: Vec<Vec<VertexId>>,
}

impl PathFamily {
    /// The family consisting of the single one-vertex path `(root)`.
    pub fn trivial(root: VertexId) -> Self {
        PathFamily {
            root,
            paths: vec![vec![root]],
        }
    }

    pub fn single(path: Vec<VertexId>) -> Self {
        assert!(!path.is_empty(), "a path has at least one vertex");
        PathFamily {
            root: path[0],
            paths: vec![path],
        }
    }

    /// Builds a family, dropping duplicate paths. Every path must start at
    /// `root`.
    pub fn new(root: VertexId, paths: Vec<Vec<VertexId>>) -> Result<Self, MerkleError> {
        if paths.is_empty() {
            return Err(MerkleError::MalformedProof("empty path family".into()));
        }
        let mut out: Vec<Vec<VertexId>> = Vec::with_capacity(paths.len());
        for p in paths {
            if p.first() != Some(&root) {
                return Err(MerkleError::MalformedProof(format!(
                    "path does not start at root {root}"
                )));
            }
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(PathFamily { root, paths: out })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn paths(&self) -> &[Vec<VertexId>] {
        &self.paths
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.paths.iter().flatten().copied().collect()
    }

    /// Checks that every consecutive pair of every path is an edge.
    pub fn check_edges<G: Dag + ?Sized>(&self, graph: &G) -> Result<(), MerkleError> {
        for p in &self.paths {
            if !graph.contains(p[0]) {
                return Err(MerkleError::NoSuchVertex(p[0]));
            }
            for w in p.windows(2) {
                if !graph.has_edge(w[0], w[1]) {
                    return Err(MerkleError::MalformedProof(format!(
                        "{} -> {} is not an edge",
                        w[0], w[1]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Open out-neighborhood: out-neighbors of path vertices that are not
    /// themselves path vertices.
    pub fn open_neighborhood<G: Dag + ?Sized>(&self, graph: &G) -> BTreeSet<VertexId> {
        let inside = self.vertices();
        inside
            .iter()
            .flat_map(|v| graph.out_neighbors(*v))
            .filter(|w| !inside.contains(w))
            .collect()
    }

    pub fn closed_neighborhood<G: Dag + ?Sized>(&self, graph: &G) -> BTreeSet<VertexId> {
        let mut all = self.vertices();
        all.extend(self.open_neighborhood(graph));
        all
    }
}

/// Open out-neighborhood of an arbitrary vertex set.
pub fn open_neighborhood<G: Dag + ?Sized>(
    graph: &G,
    set: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    set.iter()
        .flat_map(|v| graph.out_neighbors(*v))
        .filter(|w| !set.contains(w))
        .collect()
}

pub fn closed_neighborhood<G: Dag + ?Sized>(
    graph: &G,
    set: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    let mut out = set.clone();
    out.extend(open_neighborhood(graph, set));
    out
}

/// The smallest vertex set from which the closed neighborhood of `set` can
/// be recomputed: its open out-neighborhood plus any sinks inside `set`.
pub fn frontier<G: Dag + ?Sized>(graph: &G, set: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut out = open_neighborhood(graph, set);
    out.extend(set.iter().filter(|v| graph.is_sink(**v)).copied());
    out
}
