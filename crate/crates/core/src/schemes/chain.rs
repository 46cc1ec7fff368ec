//! Schemes built on the Merkle linked list: linear, full, skip list, and the
//! two antimonotone schemes.

use std::collections::BTreeSet;

use crate::hashcore::{Dag, ExplicitDag, PathFamily};
use crate::vertex::{VertexId, VertexKind};

use super::numeric::Arity;
use super::tree::nextpower;
use super::{check_len, check_pair, shortest_path, Bfs, SchemeGraph, SchemeId, TruncatedGraph};

/// How the antimonotone jump targets are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// The closed-form jump functions, evaluated as written.
    Formula,
    /// The copy construction over generations.
    Recursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    Linear,
    Full,
    SkipList,
    Antimonotone(Arity, Construction),
}

/// A scheme whose commit vertex for length `n` is `Chain(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainScheme {
    kind: ChainKind,
}

fn chain(n: u64) -> VertexId {
    VertexId::chain(n)
}

impl ChainScheme {
    pub fn new(kind: ChainKind) -> Self {
        ChainScheme { kind }
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    /// The extra jump target of `Chain(n)` in the antimonotone schemes.
    pub fn jump(&self, n: u64) -> Option<u64> {
        let ChainKind::Antimonotone(arity, construction) = self.kind else {
            return None;
        };
        let j = match construction {
            Construction::Formula => arity.formula_jump(n),
            Construction::Recursive => arity.recursive_jump(n),
        };
        (j >= 1).then_some(j)
    }

    /// Chain vertices `Chain(m)`, `m <= n`, that some longer sequence links
    /// to, together with `Chain(n)` itself. No other label of the first `n`
    /// items is ever needed again, so this is the smallest digest pool.
    fn future_targets(&self, n: u64) -> BTreeSet<VertexId> {
        let mut out: BTreeSet<VertexId> = [chain(n)].into_iter().collect();
        // Jumps shrink indices by at most half plus a constant, so targets at
        // or below n only come from j <= 2n + 8.
        for j in n + 1..=2 * n + 8 {
            if let Some(t) = self.jump(j) {
                if t <= n {
                    out.insert(chain(t));
                }
            }
        }
        out
    }

    fn chain_path(&self, from: u64, to: u64) -> Vec<VertexId> {
        shortest_path(self, chain(from), chain(to), move |v| {
            v.kind == VertexKind::Chain && v.a >= to
        })
    }
}

impl Dag for ChainScheme {
    fn contains(&self, v: VertexId) -> bool {
        v.a >= 1 && v.b == 0 && matches!(v.kind, VertexKind::Sink | VertexKind::Chain)
    }

    fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        if v.kind != VertexKind::Chain {
            return Vec::new();
        }
        let n = v.a;
        let mut out = vec![VertexId::sink(n)];
        match self.kind {
            ChainKind::Linear => {
                if n >= 2 {
                    out.push(chain(n - 1));
                }
            }
            ChainKind::Full => out.extend((1..n).map(chain)),
            ChainKind::SkipList => {
                let mut step = 1u64;
                while n.is_multiple_of(step) && step < n {
                    out.push(chain(n - step));
                    step <<= 1;
                }
            }
            ChainKind::Antimonotone(..) => {
                if n >= 2 {
                    out.push(chain(n - 1));
                }
                if let Some(j) = self.jump(n) {
                    out.push(chain(j));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl SchemeGraph for ChainScheme {
    fn id(&self) -> SchemeId {
        match self.kind {
            ChainKind::Linear => SchemeId::Linear,
            ChainKind::Full => SchemeId::Full,
            ChainKind::SkipList => SchemeId::SkipList,
            ChainKind::Antimonotone(Arity::Binary, _) => SchemeId::AntimonotoneSimple,
            ChainKind::Antimonotone(Arity::Ternary, _) => SchemeId::AntimonotoneOptimal,
        }
    }

    fn name(&self) -> String {
        match self.kind {
            ChainKind::Antimonotone(_, Construction::Recursive) => {
                format!("{}-recursive", self.id().name())
            }
            _ => self.id().name().to_string(),
        }
    }

    fn gcommit(&self, n: u64) -> VertexId {
        check_len(n);
        chain(n)
    }

    fn gcertify(&self, ls: u64, lt: u64) -> PathFamily {
        check_pair(ls, lt);
        match self.kind {
            ChainKind::Full => PathFamily::single(vec![chain(lt), chain(ls)]),
            _ => PathFamily::single(self.chain_path(lt, ls)),
        }
    }

    fn gcertify_many(&self, lt: u64, prefixes: &[u64]) -> Vec<PathFamily> {
        let Some(&lowest) = prefixes.iter().min() else {
            return Vec::new();
        };
        if self.kind == ChainKind::Full {
            return prefixes.iter().map(|&ls| self.gcertify(ls, lt)).collect();
        }
        let bfs = Bfs::run(
            self,
            chain(lt),
            move |v| v.kind == VertexKind::Chain && v.a >= lowest,
            None,
        );
        prefixes
            .iter()
            .map(|&ls| {
                check_pair(ls, lt);
                PathFamily::single(bfs.path_to(chain(ls)).expect("chain reaches every prefix"))
            })
            .collect()
    }

    fn certificate_pool(&self, n: u64) -> BTreeSet<VertexId> {
        check_len(n);
        match self.kind {
            ChainKind::Linear | ChainKind::Full => (1..=n).map(chain).collect(),
            ChainKind::SkipList => {
                let top = nextpower(n).a;
                let mut out: BTreeSet<VertexId> = self.chain_path(top, n).into_iter().collect();
                out.extend(self.chain_path(n, 1));
                out
            }
            ChainKind::Antimonotone(arity, _) => {
                let t = arity.generation(n);
                if t == 0 {
                    return [chain(1)].into_iter().collect();
                }
                let next = arity.vertebra(t);
                let prev = arity.vertebra(t - 1);
                let mut out: BTreeSet<VertexId> = self.chain_path(next, n).into_iter().collect();
                out.extend(self.chain_path(n, prev));
                out.extend(self.chain_path(prev, 1));
                out
            }
        }
    }

    fn digest_pool(&self, n: u64) -> Vec<VertexId> {
        check_len(n);
        match self.kind {
            ChainKind::Linear => vec![chain(n)],
            ChainKind::Full => (1..=n).map(chain).collect(),
            ChainKind::SkipList => {
                let mut path = self.chain_path(n, 1);
                path.sort_unstable();
                path
            }
            ChainKind::Antimonotone(..) => self.future_targets(n).into_iter().collect(),
        }
    }

    fn identifier_paths(&self, n: u64) -> PathFamily {
        check_len(n);
        PathFamily::trivial(chain(n))
    }
}

/// Digest pool of the optimal antimonotone scheme as prescribed in the
/// literature: for every order value up to the generation of `n`, the
/// largest `m <= n` of that order. Kept for comparison only.
pub fn prescribed_optimal_digest_pool(n: u64) -> Vec<VertexId> {
    let arity = Arity::Ternary;
    let mut best: std::collections::BTreeMap<u64, u64> = Default::default();
    for m in 1..=n {
        best.insert(arity.formula_order(m), m);
    }
    let cap = arity.generation(n) as u64 + 1;
    let mut out: Vec<VertexId> = best
        .into_iter()
        .filter(|(order, _)| *order <= cap)
        .map(|(_, m)| chain(m))
        .collect();
    out.sort_unstable();
    out
}

/// Digest pool of the simple antimonotone scheme as prescribed in the
/// literature: the shortest path from `Chain(n)` to the vertebra of the
/// previous generation. Kept for comparison only.
pub fn prescribed_simple_digest_pool(scheme: &ChainScheme, n: u64) -> Vec<VertexId> {
    let arity = Arity::Binary;
    let t = arity.generation(n);
    if t == 0 {
        return vec![chain(1)];
    }
    let mut path = scheme.chain_path(n, arity.vertebra(t - 1));
    path.sort_unstable();
    path
}

/// Builds the first `t` generations of an antimonotone graph by literally
/// copying the previous stage: each copy keeps its internal edges shifted,
/// its spine jumps point at the vertebra closing the previous copy, and a new
/// vertebra links to the last copy and to the old vertebra.
pub fn antimonotone_recursive_oracle(arity: Arity, t: u32) -> TruncatedGraph {
    assert!(t <= 12, "generation bound exceeded");
    let copies: u64 = match arity {
        Arity::Binary => 2,
        Arity::Ternary => 3,
    };
    let mut size = 1u64;
    let mut spine: BTreeSet<u64> = [1].into_iter().collect();
    let mut edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    for _ in 0..t {
        let old = edges.clone();
        for q in 1..copies {
            let off = q * size;
            edges.insert((1 + off, off));
            for &(u, w) in &old {
                if spine.contains(&u) && w + 1 != u {
                    edges.insert((u + off, off));
                } else {
                    edges.insert((u + off, w + off));
                }
            }
        }
        let top = copies * size + 1;
        edges.insert((top, top - 1));
        edges.insert((top, size));
        spine.insert(top);
        size = top;
    }
    let mut dag = ExplicitDag::new();
    for m in 1..=size {
        dag.add_edge(chain(m), VertexId::sink(m));
    }
    for (u, w) in edges {
        dag.add_edge(chain(u), chain(w));
    }
    let id = match arity {
        Arity::Binary => SchemeId::AntimonotoneSimple,
        Arity::Ternary => SchemeId::AntimonotoneOptimal,
    };
    TruncatedGraph::from_dag(id, size, dag, (1..=size).map(chain).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{
        antimonotone_optimal_graph, antimonotone_recursive_graph, antimonotone_simple_graph,
        full_graph, linear_graph, skiplist_graph, truncate,
    };

    fn path(v: &[u64]) -> Vec<VertexId> {
        v.iter().map(|&n| chain(n)).collect()
    }

    #[test]
    fn linear_certify_path() {
        let g = linear_graph();
        assert_eq!(g.gcertify(3, 7).paths()[0], path(&[7, 6, 5, 4, 3]));
        for n in 1..50 {
            assert_eq!(g.digest_pool(n), vec![chain(n)]);
        }
    }

    #[test]
    fn full_edge_count() {
        let g = full_graph();
        for n in 1..=64u64 {
            let t = truncate(&g, n);
            assert_eq!(t.edge_count() as u64, n * (n - 1) / 2 + n);
        }
        assert_eq!(g.gcertify(2, 9).paths()[0], path(&[9, 2]));
    }

    #[test]
    fn skiplist_neighbors_and_paths() {
        let g = skiplist_graph();
        assert_eq!(
            g.out_neighbors(chain(8)),
            vec![VertexId::sink(8), chain(4), chain(6), chain(7)]
        );
        assert_eq!(g.gcertify(1, 8).paths()[0], path(&[8, 4, 2, 1]));
        for n in 2..600u64 {
            for w in g.out_neighbors(chain(n)).into_iter().skip(1) {
                let step = n - w.a;
                assert!(step.is_power_of_two() && n % step == 0);
            }
        }
    }

    #[test]
    fn antimonotone_edges() {
        let g = antimonotone_simple_graph();
        assert_eq!(
            g.out_neighbors(chain(9)),
            vec![VertexId::sink(9), chain(7), chain(8)]
        );
        assert_eq!(g.out_neighbors(chain(2)), vec![VertexId::sink(2), chain(1)]);
        let o = antimonotone_optimal_graph();
        assert_eq!(
            o.out_neighbors(chain(5)),
            vec![VertexId::sink(5), chain(3), chain(4)]
        );
        assert_eq!(o.out_neighbors(chain(4)), vec![VertexId::sink(4), chain(3)]);
    }

    #[test]
    fn simple_certificate_pool_of_nine() {
        let g = antimonotone_simple_graph();
        let pool = g.certificate_pool(9);
        for v in [15, 9, 7, 1] {
            assert!(pool.contains(&chain(v)), "missing p{v}");
        }
        assert!(pool.iter().all(|v| v.a <= 15));
    }

    #[test]
    fn future_targets_scan_bound_is_sufficient() {
        for scheme in [
            antimonotone_simple_graph(),
            antimonotone_optimal_graph(),
            antimonotone_recursive_graph(Arity::Binary),
            antimonotone_recursive_graph(Arity::Ternary),
        ] {
            for n in 1..2500u64 {
                let wide: BTreeSet<VertexId> = (n + 1..=4 * n + 64)
                    .filter_map(|j| scheme.jump(j))
                    .filter(|&t| t <= n)
                    .map(chain)
                    .chain([chain(n)])
                    .collect();
                assert_eq!(scheme.future_targets(n), wide, "{} at {n}", scheme.name());
            }
        }
    }

    #[test]
    fn recursive_oracle_shape() {
        let g0 = antimonotone_recursive_oracle(Arity::Binary, 0);
        assert_eq!(g0.vertex_count(), 2);
        for t in 0..=10 {
            let g = antimonotone_recursive_oracle(Arity::Binary, t);
            assert_eq!(g.n(), (1u64 << (t + 1)) - 1);
            let g = antimonotone_recursive_oracle(Arity::Ternary, t);
            assert_eq!(g.n(), (3u64.pow(t + 1) - 1) / 2);
        }
    }

    #[test]
    fn recursive_jumps_match_the_literal_copy_construction() {
        for arity in [Arity::Binary, Arity::Ternary] {
            let scheme = antimonotone_recursive_graph(arity);
            for t in 0..=7 {
                let lit = antimonotone_recursive_oracle(arity, t);
                let built = truncate(&scheme, lit.n());
                assert_eq!(
                    lit.dag().edges().collect::<Vec<_>>(),
                    built.dag().edges().collect::<Vec<_>>(),
                    "{arity:?} generation {t}"
                );
            }
        }
    }
}
