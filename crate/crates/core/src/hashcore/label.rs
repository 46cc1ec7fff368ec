use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::hash::{Hasher, Label};
use crate::vertex::VertexId;

use super::{Dag, MerkleError};

/// A labeling of some vertex subset, keyed in canonical order.
pub type Labeling = BTreeMap<VertexId, Label>;

/// Supplies the labels of sink vertices.
pub trait SinkLabels {
    fn sink_label(&self, v: VertexId) -> Option<Label>;
}

impl SinkLabels for Labeling {
    fn sink_label(&self, v: VertexId) -> Option<Label> {
        self.get(&v).copied()
    }
}

impl<S: SinkLabels + ?Sized> SinkLabels for &S {
    fn sink_label(&self, v: VertexId) -> Option<Label> {
        (**self).sink_label(v)
    }
}

/// Adapts a closure into a sink label provider.
pub struct SinkFn<F>(pub F);

impl<F: Fn(VertexId) -> Option<Label>> SinkLabels for SinkFn<F> {
    fn sink_label(&self, v: VertexId) -> Option<Label> {
        (self.0)(v)
    }
}

/// Iterative post-order walk shared by the label evaluators. `known`
/// resolves vertices that need no recursion, `leaf` resolves vertices with no
/// out-neighbors (given the path that led to them), and `combine` folds the
/// values of all out-neighbors in canonical order.
struct Walk<'a, G: ?Sized> {
    graph: &'a G,
}

impl<'a, G: Dag + ?Sized> Walk<'a, G> {
    fn run<T, K, L, C>(
        &self,
        root: VertexId,
        memo: &mut HashMap<VertexId, T>,
        mut known: K,
        mut leaf: L,
        mut combine: C,
    ) -> Result<T, MerkleError>
    where
        T: Clone,
        K: FnMut(VertexId) -> Option<T>,
        L: FnMut(VertexId, &[VertexId]) -> Result<T, MerkleError>,
        C: FnMut(VertexId, Vec<T>) -> T,
    {
        if let Some(t) = memo.get(&root) {
            return Ok(t.clone());
        }
        if !self.graph.contains(root) {
            return Err(MerkleError::NoSuchVertex(root));
        }
        let mut stack = vec![root];
        let mut expanded: HashSet<VertexId> = HashSet::new();
        let mut path: Vec<VertexId> = Vec::new();
        while let Some(&top) = stack.last() {
            if memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            if let Some(t) = known(top) {
                memo.insert(top, t);
                stack.pop();
                continue;
            }
            let children = self.graph.out_neighbors(top);
            if children.is_empty() {
                let t = leaf(top, &path)?;
                memo.insert(top, t);
                stack.pop();
                continue;
            }
            let missing: Vec<VertexId> = children
                .iter()
                .filter(|c| !memo.contains_key(c))
                .copied()
                .collect();
            if missing.is_empty() {
                let values = children.iter().map(|c| memo[c].clone()).collect();
                let t = combine(top, values);
                memo.insert(top, t);
                if expanded.remove(&top) {
                    debug_assert_eq!(path.last(), Some(&top));
                    path.pop();
                }
                stack.pop();
                continue;
            }
            if !expanded.insert(top) {
                return Err(MerkleError::Cycle(top));
            }
            path.push(top);
            for c in missing {
                if expanded.contains(&c) {
                    return Err(MerkleError::Cycle(c));
                }
                if !self.graph.contains(c) {
                    return Err(MerkleError::NoSuchVertex(c));
                }
                stack.push(c);
            }
        }
        Ok(memo[&root].clone())
    }
}

/// Memoizing evaluator for the true labels of a Merkle DAG.
pub struct Labeler<'g, G: ?Sized, S> {
    graph: &'g G,
    sinks: S,
    hasher: Hasher,
    memo: HashMap<VertexId, Label>,
}

impl<'g, G: Dag + ?Sized, S: SinkLabels> Labeler<'g, G, S> {
    pub fn new(graph: &'g G, sinks: S, hasher: Hasher) -> Self {
        Labeler {
            graph,
            sinks,
            hasher,
            memo: HashMap::new(),
        }
    }

    pub fn hasher(&self) -> &Hasher {
        &self.hasher
    }

    pub fn cached(&self) -> usize {
        self.memo.len()
    }

    pub fn label(&mut self, v: VertexId) -> Result<Label, MerkleError> {
        let sinks = &self.sinks;
        let hasher = &self.hasher;
        Walk { graph: self.graph }.run(
            v,
            &mut self.memo,
            |_| None,
            |x, _| sinks.sink_label(x).ok_or(MerkleError::MissingSinkLabel(x)),
            |_, children| hasher.inner_label(children.iter()),
        )
    }

    pub fn labels<I>(&mut self, vertices: I) -> Result<Labeling, MerkleError>
    where
        I: IntoIterator<Item = VertexId>,
    {
        vertices
            .into_iter()
            .map(|v| self.label(v).map(|l| (v, l)))
            .collect()
    }
}

/// The true label of `v`: the provider's label for sinks, otherwise the hash
/// of the out-neighbor labels in canonical order.
pub fn label_of<G: Dag + ?Sized, S: SinkLabels>(
    graph: &G,
    v: VertexId,
    sinks: S,
    hasher: &Hasher,
) -> Result<Label, MerkleError> {
    Labeler::new(graph, sinks, hasher.clone()).label(v)
}

/// Evaluates labels implied by a partial labeling `p`: entries of `p` are
/// taken as given, everything else is recomputed from out-neighborhoods.
pub struct LabelFrom<'g, 'p, G: ?Sized> {
    graph: &'g G,
    labeling: &'p Labeling,
    hasher: Hasher,
    memo: HashMap<VertexId, Label>,
}

impl<'g, 'p, G: Dag + ?Sized> LabelFrom<'g, 'p, G> {
    pub fn new(graph: &'g G, labeling: &'p Labeling, hasher: Hasher) -> Self {
        LabelFrom {
            graph,
            labeling,
            hasher,
            memo: HashMap::new(),
        }
    }

    pub fn label(&mut self, v: VertexId) -> Result<Label, MerkleError> {
        let labeling = self.labeling;
        let hasher = &self.hasher;
        Walk { graph: self.graph }.run(
            v,
            &mut self.memo,
            |x| labeling.get(&x).copied(),
            |leaf, path| {
                let mut witness = path.to_vec();
                witness.push(leaf);
                Err(MerkleError::Underdetermined { witness })
            },
            |_, children| hasher.inner_label(children.iter()),
        )
    }
}

pub fn label_from<G: Dag + ?Sized>(
    graph: &G,
    v: VertexId,
    labeling: &Labeling,
    hasher: &Hasher,
) -> Result<Label, MerkleError> {
    LabelFrom::new(graph, labeling, hasher.clone()).label(v)
}

/// Memoized test of whether a fixed set `U` determines vertices, i.e. every
/// maximal path from the vertex meets `U`.
pub struct Determiner<'g, 'u, G: ?Sized> {
    graph: &'g G,
    set: &'u BTreeSet<VertexId>,
    memo: HashMap<VertexId, bool>,
}

impl<'g, 'u, G: Dag + ?Sized> Determiner<'g, 'u, G> {
    pub fn new(graph: &'g G, set: &'u BTreeSet<VertexId>) -> Self {
        Determiner {
            graph,
            set,
            memo: HashMap::new(),
        }
    }

    pub fn determines(&mut self, v: VertexId) -> bool {
        let set = self.set;
        Walk { graph: self.graph }
            .run(
                v,
                &mut self.memo,
                |x| set.contains(&x).then_some(true),
                |_, _| Ok(false),
                |_, children| children.into_iter().all(|b| b),
            )
            .unwrap_or(false)
    }
}

pub fn determines<G: Dag + ?Sized>(graph: &G, set: &BTreeSet<VertexId>, v: VertexId) -> bool {
    Determiner::new(graph, set).determines(v)
}
