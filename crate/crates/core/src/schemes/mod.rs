//! Transitive prefix authentication graphs: the contract and its eight
//! instances.
//!
//! Every scheme is an infinite DAG explored lazily through
//! [`Dag::out_neighbors`]. Lengths are 1-based; calling a contract method
//! with length 0 panics, and the public layers above reject 0 first.

mod chain;
mod dot;
pub mod numeric;
mod tree;
mod tree_schemes;
mod truncated;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hashcore::{Dag, PathFamily};
use crate::vertex::VertexId;

pub use chain::{
    antimonotone_recursive_oracle, prescribed_optimal_digest_pool, prescribed_simple_digest_pool,
    ChainKind, ChainScheme, Construction,
};
pub use dot::to_dot;
pub use numeric::{
    antimonotone_f2, antimonotone_f3, antimonotone_g, antimonotone_h, bits, ceil_log2, floor_log2,
    floor_log3, popcount, v2, Arity,
};
pub use tree::{
    covering_root, forest_roots, leaf_range, nextpower, nextroot, tree_children, tree_contains,
    tree_forest, tree_parent, tree_path, ForestSummary,
};
pub use tree_schemes::{Threading, TreeFlavor, TreeScheme};
pub use truncated::{truncate, TruncatedGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("unknown scheme id {0:#04x}")]
    UnknownSchemeId(u8),
    #[error("lengths start at 1")]
    ZeroLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum SchemeId {
    Linear = 1,
    Full = 2,
    SkipList = 3,
    AntimonotoneSimple = 4,
    AntimonotoneOptimal = 5,
    ThreadedAuthTree = 6,
    Hypercore = 7,
    TransparencyLog = 8,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::Linear,
        SchemeId::Full,
        SchemeId::SkipList,
        SchemeId::AntimonotoneSimple,
        SchemeId::AntimonotoneOptimal,
        SchemeId::ThreadedAuthTree,
        SchemeId::Hypercore,
        SchemeId::TransparencyLog,
    ];

    pub fn wire(self) -> u8 {
        self as u8
    }

    pub fn from_wire(b: u8) -> Result<Self, SchemeError> {
        Self::ALL
            .into_iter()
            .find(|s| s.wire() == b)
            .ok_or(SchemeError::UnknownSchemeId(b))
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Linear => "linear",
            SchemeId::Full => "full",
            SchemeId::SkipList => "skiplist",
            SchemeId::AntimonotoneSimple => "antimonotone-simple",
            SchemeId::AntimonotoneOptimal => "antimonotone-optimal",
            SchemeId::ThreadedAuthTree => "tat",
            SchemeId::Hypercore => "hypercore",
            SchemeId::TransparencyLog => "ct",
        }
    }

    /// Whether the scheme is built on the infinite Merkle tree.
    pub fn is_tree_scheme(self) -> bool {
        matches!(
            self,
            SchemeId::ThreadedAuthTree | SchemeId::Hypercore | SchemeId::TransparencyLog
        )
    }

    /// Linking schemes expose the prefix commit vertex itself on the
    /// certificate path, so their dock is `{gcommit(n)}`.
    pub fn is_linking(self) -> bool {
        !matches!(self, SchemeId::Hypercore | SchemeId::TransparencyLog)
    }

    pub fn graph(self) -> Box<dyn SchemeGraph> {
        match self {
            SchemeId::Linear => Box::new(linear_graph()),
            SchemeId::Full => Box::new(full_graph()),
            SchemeId::SkipList => Box::new(skiplist_graph()),
            SchemeId::AntimonotoneSimple => Box::new(antimonotone_simple_graph()),
            SchemeId::AntimonotoneOptimal => Box::new(antimonotone_optimal_graph()),
            SchemeId::ThreadedAuthTree => Box::new(tat_graph()),
            SchemeId::Hypercore => Box::new(hypercore_graph()),
            SchemeId::TransparencyLog => Box::new(ct_graph()),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let id = match lower.as_str() {
            "linear" | "lin" => SchemeId::Linear,
            "full" => SchemeId::Full,
            "skiplist" | "skip-list" | "skip" | "chainiac" => SchemeId::SkipList,
            "antimonotone-simple" | "simple" | "ls2" => SchemeId::AntimonotoneSimple,
            "antimonotone-optimal" | "optimal" | "ls3" => SchemeId::AntimonotoneOptimal,
            "tat" | "threaded" => SchemeId::ThreadedAuthTree,
            "hypercore" | "hyper" => SchemeId::Hypercore,
            "ct" | "transparency" | "transparency-log" => SchemeId::TransparencyLog,
            _ => return Err(SchemeError::UnknownScheme(s.to_string())),
        };
        Ok(id)
    }
}

/// The graph contract shared by all schemes.
///
/// * `gcommit(n)` is a tight commitment to sinks `1..=n`;
/// * `dock(n)` determines `gcommit(n)`;
/// * `gcertify(ls, lt)` is a family of paths from `gcommit(lt)` whose closed
///   out-neighborhood contains `dock(ls)`;
/// * `digest_pool(n - 1)` plus sink `n` determines `gcommit(n)` and
///   `digest_pool(n)`;
/// * the frontiers of `certificate_pool(ls)` and `certificate_pool(lt)`
///   together determine the closed out-neighborhood of `gcertify(ls, lt)`;
/// * `identifier_paths(n)` is a family from `gcommit(n)` whose closed
///   out-neighborhood contains sink `n`.
pub trait SchemeGraph: Dag + Send + Sync {
    fn id(&self) -> SchemeId;

    /// Display name; differs from the id name only for measurement variants.
    fn name(&self) -> String {
        self.id().name().to_string()
    }

    fn gcommit(&self, n: u64) -> VertexId;

    fn dock(&self, n: u64) -> BTreeSet<VertexId> {
        [self.gcommit(n)].into_iter().collect()
    }

    fn gcertify(&self, ls: u64, lt: u64) -> PathFamily;

    /// `gcertify(ls, lt)` for many prefixes of one `lt`. Implementations may
    /// share work between the queries.
    fn gcertify_many(&self, lt: u64, prefixes: &[u64]) -> Vec<PathFamily> {
        prefixes.iter().map(|&ls| self.gcertify(ls, lt)).collect()
    }

    fn certificate_pool(&self, n: u64) -> BTreeSet<VertexId>;

    fn digest_pool(&self, n: u64) -> Vec<VertexId>;

    fn identifier_paths(&self, n: u64) -> PathFamily;
}

pub(crate) fn check_len(n: u64) {
    assert!(n >= 1, "lengths start at 1");
}

pub(crate) fn check_pair(ls: u64, lt: u64) {
    check_len(ls);
    assert!(ls < lt, "not a proper prefix: {ls} >= {lt}");
}

pub fn linear_graph() -> ChainScheme {
    ChainScheme::new(ChainKind::Linear)
}

pub fn full_graph() -> ChainScheme {
    ChainScheme::new(ChainKind::Full)
}

pub fn skiplist_graph() -> ChainScheme {
    ChainScheme::new(ChainKind::SkipList)
}

pub fn antimonotone_simple_graph() -> ChainScheme {
    ChainScheme::new(ChainKind::Antimonotone(
        Arity::Binary,
        Construction::Formula,
    ))
}

pub fn antimonotone_optimal_graph() -> ChainScheme {
    ChainScheme::new(ChainKind::Antimonotone(
        Arity::Ternary,
        Construction::Formula,
    ))
}

/// The antimonotone graph built by the copy construction instead of the
/// closed-form jump functions. Used for side-by-side measurement.
pub fn antimonotone_recursive_graph(arity: Arity) -> ChainScheme {
    ChainScheme::new(ChainKind::Antimonotone(arity, Construction::Recursive))
}

pub fn tat_graph() -> TreeScheme {
    TreeScheme::new(TreeFlavor::Threaded(Threading::Previous))
}

pub fn hypercore_graph() -> TreeScheme {
    TreeScheme::new(TreeFlavor::Hypercore)
}

pub fn ct_graph() -> TreeScheme {
    TreeScheme::new(TreeFlavor::TransparencyLog)
}

/// Breadth-first search tree. Out-neighbors are visited in canonical order
/// and every vertex keeps the parent that discovered it first, so paths are
/// deterministic and do not depend on when the search stops.
pub(crate) struct Bfs {
    source: VertexId,
    parent: HashMap<VertexId, VertexId>,
}

impl Bfs {
    /// Explores from `source` through vertices accepted by `keep`, stopping
    /// early once `stop` is discovered.
    pub(crate) fn run<G, K>(graph: &G, source: VertexId, keep: K, stop: Option<VertexId>) -> Self
    where
        G: Dag + ?Sized,
        K: Fn(VertexId) -> bool,
    {
        let mut parent = HashMap::new();
        let mut queue = VecDeque::from([source]);
        if Some(source) != stop {
            'outer: while let Some(u) = queue.pop_front() {
                for w in graph.out_neighbors(u) {
                    if w == source || parent.contains_key(&w) || !keep(w) {
                        continue;
                    }
                    parent.insert(w, u);
                    if Some(w) == stop {
                        break 'outer;
                    }
                    queue.push_back(w);
                }
            }
        }
        Bfs { source, parent }
    }

    pub(crate) fn path_to(&self, target: VertexId) -> Option<Vec<VertexId>> {
        let mut path = vec![target];
        let mut cur = target;
        while cur != self.source {
            cur = *self.parent.get(&cur)?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

pub(crate) fn shortest_path<G, K>(graph: &G, from: VertexId, to: VertexId, keep: K) -> Vec<VertexId>
where
    G: Dag + ?Sized,
    K: Fn(VertexId) -> bool,
{
    Bfs::run(graph, from, keep, Some(to))
        .path_to(to)
        .unwrap_or_else(|| panic!("no path from {from} to {to}"))
}
