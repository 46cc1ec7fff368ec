//! Schemes built on the infinite Merkle tree: threaded authentication
//! trees, hypercore, and transparency logs.

use std::collections::BTreeSet;

use crate::hashcore::{Dag, PathFamily};
use crate::vertex::{VertexId, VertexKind};

use super::numeric::{floor_log2, popcount};
use super::tree::{
    forest_roots, is_tree_vertex, nextroot, tree_children, tree_contains, tree_path,
};
use super::{check_len, check_pair, shortest_path, Bfs, SchemeGraph, SchemeId};

/// Where the threading edges of a leaf vertex `(n, 0)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Threading {
    /// Roots of the forest over the first `n - 1` leaves.
    Previous,
    /// Roots of the forest over the first `n` leaves. This includes an
    /// ancestor of `(n, 0)` and so creates cycles; kept as a broken variant
    /// for mutation testing.
    Current,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeFlavor {
    Threaded(Threading),
    Hypercore,
    TransparencyLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeScheme {
    flavor: TreeFlavor,
}

fn leaf(n: u64) -> VertexId {
    VertexId::tree(n, 0)
}

fn root_of_power(n: u64) -> VertexId {
    VertexId::tree(n, floor_log2(n) as u64)
}

impl TreeScheme {
    pub fn new(flavor: TreeFlavor) -> Self {
        TreeScheme { flavor }
    }

    pub fn flavor(&self) -> TreeFlavor {
        self.flavor
    }

    /// Path from `gcommit(n)` to the forest root at `n` with the given
    /// position in ascending size order, both inclusive.
    fn commit_path_to_root(&self, n: u64, ascending_index: usize) -> Vec<VertexId> {
        let mut roots = forest_roots(n);
        roots.reverse();
        let root = roots[ascending_index];
        let r = roots.len() as u64;
        if r == 1 {
            return vec![root];
        }
        match self.flavor {
            TreeFlavor::Hypercore => vec![VertexId::hyper_digest(n), root],
            TreeFlavor::TransparencyLog => {
                let lowest = (ascending_index as u64).max(1);
                let mut path: Vec<VertexId> = (lowest..r)
                    .rev()
                    .map(|j| VertexId::ct_internal(n, j))
                    .collect();
                path.push(root);
                path
            }
            TreeFlavor::Threaded(_) => unreachable!("threaded trees commit to a leaf"),
        }
    }

    /// Path from `gcommit(n)` through the forest root covering `v` down to
    /// `v`.
    fn commit_path_to(&self, n: u64, v: VertexId) -> Vec<VertexId> {
        let mut roots = forest_roots(n);
        roots.reverse();
        let index = roots
            .iter()
            .position(|r| tree_contains(*r, v))
            .unwrap_or_else(|| panic!("{v} outside the forest of {n}"));
        let mut path = self.commit_path_to_root(n, index);
        let root = *path.last().unwrap();
        path.extend(tree_path(root, v).into_iter().skip(1));
        path
    }

    fn threaded(&self) -> Option<Threading> {
        match self.flavor {
            TreeFlavor::Threaded(t) => Some(t),
            _ => None,
        }
    }
}

impl Dag for TreeScheme {
    fn contains(&self, v: VertexId) -> bool {
        match v.kind {
            VertexKind::Sink => v.a >= 1 && v.b == 0,
            VertexKind::Tree => is_tree_vertex(v),
            VertexKind::HyperDigest => {
                self.flavor == TreeFlavor::Hypercore
                    && v.b == 0
                    && v.a >= 1
                    && !v.a.is_power_of_two()
            }
            VertexKind::CtInternal => {
                self.flavor == TreeFlavor::TransparencyLog
                    && v.a >= 1
                    && v.b >= 1
                    && v.b < popcount(v.a) as u64
            }
            VertexKind::Chain => false,
        }
    }

    fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = match v.kind {
            VertexKind::Sink | VertexKind::Chain => return Vec::new(),
            VertexKind::Tree => {
                let mut out = tree_children(v);
                if v.b == 0 {
                    match self.threaded() {
                        Some(Threading::Previous) => out.extend(forest_roots(v.a - 1)),
                        Some(Threading::Current) => out.extend(forest_roots(v.a)),
                        None => {}
                    }
                }
                out
            }
            VertexKind::HyperDigest => forest_roots(v.a),
            VertexKind::CtInternal => {
                let mut roots = forest_roots(v.a);
                roots.reverse();
                if v.b == 1 {
                    vec![roots[0], roots[1]]
                } else {
                    vec![VertexId::ct_internal(v.a, v.b - 1), roots[v.b as usize]]
                }
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl SchemeGraph for TreeScheme {
    fn id(&self) -> SchemeId {
        match self.flavor {
            TreeFlavor::Threaded(_) => SchemeId::ThreadedAuthTree,
            TreeFlavor::Hypercore => SchemeId::Hypercore,
            TreeFlavor::TransparencyLog => SchemeId::TransparencyLog,
        }
    }

    fn name(&self) -> String {
        match self.flavor {
            TreeFlavor::Threaded(Threading::Current) => "tat-current-threading".into(),
            _ => self.id().name().to_string(),
        }
    }

    fn gcommit(&self, n: u64) -> VertexId {
        check_len(n);
        match self.flavor {
            TreeFlavor::Threaded(_) => leaf(n),
            _ if n.is_power_of_two() => root_of_power(n),
            TreeFlavor::Hypercore => VertexId::hyper_digest(n),
            TreeFlavor::TransparencyLog => VertexId::ct_internal(n, popcount(n) as u64 - 1),
        }
    }

    fn dock(&self, n: u64) -> BTreeSet<VertexId> {
        check_len(n);
        match self.flavor {
            TreeFlavor::Threaded(_) => [leaf(n)].into_iter().collect(),
            _ => forest_roots(n).into_iter().collect(),
        }
    }

    fn gcertify(&self, ls: u64, lt: u64) -> PathFamily {
        check_pair(ls, lt);
        let root = self.gcommit(lt);
        if self.threaded().is_some() {
            let path = shortest_path(self, root, leaf(ls), move |v| {
                v.kind == VertexKind::Tree && v.a >= ls
            });
            return PathFamily::single(path);
        }
        // One path per dock vertex of the prefix, ending at its in-neighbor
        // inside the structure of lt.
        let paths = forest_roots(ls)
            .into_iter()
            .map(|d| {
                let mut path = self.commit_path_to(lt, d);
                path.pop();
                path
            })
            .collect();
        PathFamily::new(root, paths).expect("paths share the commit vertex")
    }

    fn gcertify_many(&self, lt: u64, prefixes: &[u64]) -> Vec<PathFamily> {
        let Some(&lowest) = prefixes.iter().min() else {
            return Vec::new();
        };
        if self.threaded().is_none() {
            return prefixes.iter().map(|&ls| self.gcertify(ls, lt)).collect();
        }
        let bfs = Bfs::run(
            self,
            leaf(lt),
            move |v| v.kind == VertexKind::Tree && v.a >= lowest,
            None,
        );
        prefixes
            .iter()
            .map(|&ls| {
                check_pair(ls, lt);
                PathFamily::single(bfs.path_to(leaf(ls)).expect("threading reaches every leaf"))
            })
            .collect()
    }

    fn certificate_pool(&self, n: u64) -> BTreeSet<VertexId> {
        check_len(n);
        let top = nextroot(n);
        let mut out: BTreeSet<VertexId> = tree_path(top, leaf(n)).into_iter().collect();
        out.extend(tree_path(top, leaf(1)));
        out
    }

    fn digest_pool(&self, n: u64) -> Vec<VertexId> {
        check_len(n);
        let mut roots = forest_roots(n);
        roots.sort_unstable();
        roots
    }

    fn identifier_paths(&self, n: u64) -> PathFamily {
        check_len(n);
        match self.flavor {
            TreeFlavor::Threaded(_) => PathFamily::trivial(leaf(n)),
            _ => PathFamily::single(self.commit_path_to(n, leaf(n))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashcore::frontier;
    use crate::schemes::{ct_graph, hypercore_graph, tat_graph, truncate};

    #[test]
    fn tat_threading() {
        let g = tat_graph();
        assert_eq!(
            g.out_neighbors(leaf(6)),
            vec![
                VertexId::sink(6),
                VertexId::tree(4, 2),
                VertexId::tree(5, 0)
            ]
        );
        for n in 2..=1024u64 {
            assert_eq!(g.out_neighbors(leaf(n)).len() as u32, 1 + popcount(n - 1));
        }
    }

    #[test]
    fn tat_certificate_pool_of_six() {
        let g = tat_graph();
        let pool = g.certificate_pool(6);
        let expected: BTreeSet<VertexId> = [(8, 3), (8, 2), (6, 1), (6, 0), (4, 2), (2, 1), (1, 0)]
            .into_iter()
            .map(|(a, b)| VertexId::tree(a, b))
            .collect();
        assert_eq!(pool, expected);
        assert_eq!(frontier(&g, &pool).len(), 6);
    }

    #[test]
    fn hypercore_commit_and_dock() {
        let g = hypercore_graph();
        assert_eq!(g.gcommit(8), VertexId::tree(8, 3));
        assert!(!g.contains(VertexId::hyper_digest(8)));
        assert_eq!(
            g.dock(6),
            [VertexId::tree(4, 2), VertexId::tree(6, 1)]
                .into_iter()
                .collect()
        );
        let fam = g.gcertify(4, 7);
        assert_eq!(fam.paths(), &[vec![VertexId::hyper_digest(7)]]);
        assert!(fam.closed_neighborhood(&g).contains(&VertexId::tree(4, 2)));
    }

    #[test]
    fn ct_internal_vertices() {
        let g = ct_graph();
        assert_eq!(g.gcommit(6), VertexId::ct_internal(6, 1));
        assert_eq!(
            g.out_neighbors(VertexId::ct_internal(6, 1)),
            vec![VertexId::tree(4, 2), VertexId::tree(6, 1)]
        );
        assert_eq!(g.gcommit(7), VertexId::ct_internal(7, 2));
        assert_eq!(
            g.out_neighbors(VertexId::ct_internal(7, 2)),
            vec![VertexId::tree(4, 2), VertexId::ct_internal(7, 1)]
        );
        assert_eq!(
            g.out_neighbors(VertexId::ct_internal(7, 1)),
            vec![VertexId::tree(6, 1), VertexId::tree(7, 0)]
        );
        let t = truncate(&g, 6);
        let internal = t
            .dag()
            .vertices()
            .filter(|v| v.kind == VertexKind::CtInternal)
            .count();
        // c2.1 does not exist (2 is a power of two); c3.1, c5.1, c6.1 do.
        assert_eq!(internal, 3);
    }

    #[test]
    fn identifier_paths_reach_the_leaf() {
        for g in [tat_graph(), hypercore_graph(), ct_graph()] {
            for n in 1..200 {
                let fam = g.identifier_paths(n);
                fam.check_edges(&g).unwrap();
                assert_eq!(fam.root(), g.gcommit(n));
                assert!(fam.closed_neighborhood(&g).contains(&VertexId::sink(n)));
            }
        }
    }
}
