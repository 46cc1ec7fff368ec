//! The infinite Merkle tree: vertex `(n, k)` with `2^k | n` covers leaves
//! `n - 2^k + 1 ..= n`; `(n, k + 1)` has children `(n - 2^k, k)` and
//! `(n, k)`, and `(i, 0)` points at sink `i`.

use crate::vertex::{VertexId, VertexKind};

use super::numeric::{ceil_log2, popcount};

/// The forest of complete subtrees covering the first `n` leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestSummary {
    pub n: u64,
    /// Roots, largest tree first.
    pub roots: Vec<VertexId>,
    /// Leaf counts of the trees, matching `roots`.
    pub tree_sizes: Vec<u64>,
}

pub fn tree_forest(n: u64) -> ForestSummary {
    let roots = forest_roots(n);
    let tree_sizes = roots.iter().map(|r| 1u64 << r.b).collect();
    ForestSummary {
        n,
        roots,
        tree_sizes,
    }
}

/// Roots of the forest over the first `n` leaves, largest tree first.
pub fn forest_roots(n: u64) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(popcount(n) as usize);
    let mut covered = 0u64;
    for k in (0..64).rev() {
        if n >> k & 1 == 1 {
            covered += 1 << k;
            out.push(VertexId::tree(covered, k));
        }
    }
    out
}

/// Root of the smallest complete subtree containing leaves `1` and `n`.
pub fn nextroot(n: u64) -> VertexId {
    let k = ceil_log2(n) as u64;
    VertexId::tree(1 << k, k)
}

/// Leaf at the next power of two.
pub fn nextpower(n: u64) -> VertexId {
    VertexId::tree(1 << ceil_log2(n), 0)
}

pub fn is_tree_vertex(v: VertexId) -> bool {
    v.kind == VertexKind::Tree && v.a >= 1 && v.b < 63 && v.a.is_multiple_of(1 << v.b)
}

/// Children of a tree vertex, in canonical order.
pub fn tree_children(v: VertexId) -> Vec<VertexId> {
    debug_assert!(is_tree_vertex(v));
    if v.b == 0 {
        vec![VertexId::sink(v.a)]
    } else {
        let half = 1u64 << (v.b - 1);
        vec![
            VertexId::tree(v.a - half, v.b - 1),
            VertexId::tree(v.a, v.b - 1),
        ]
    }
}

/// The unique tree parent of a tree vertex.
pub fn tree_parent(v: VertexId) -> VertexId {
    let size = 1u64 << v.b;
    if v.a.is_multiple_of(size << 1) {
        VertexId::tree(v.a, v.b + 1)
    } else {
        VertexId::tree(v.a + size, v.b + 1)
    }
}

/// Leaves covered by a tree vertex, as an inclusive range.
pub fn leaf_range(v: VertexId) -> (u64, u64) {
    (v.a + 1 - (1 << v.b), v.a)
}

/// Whether tree vertex `anc` is `v` or one of its ancestors.
pub fn tree_contains(anc: VertexId, v: VertexId) -> bool {
    let (lo, hi) = leaf_range(anc);
    anc.b >= v.b && lo <= v.a && v.a <= hi
}

/// The tree path from `anc` down to `v`, both inclusive.
pub fn tree_path(anc: VertexId, v: VertexId) -> Vec<VertexId> {
    assert!(tree_contains(anc, v), "{anc} is not an ancestor of {v}");
    let mut path = vec![v];
    let mut cur = v;
    while cur != anc {
        cur = tree_parent(cur);
        path.push(cur);
    }
    path.reverse();
    path
}

/// The forest root at `n` whose tree contains `v`.
pub fn covering_root(n: u64, v: VertexId) -> VertexId {
    forest_roots(n)
        .into_iter()
        .find(|r| tree_contains(*r, v))
        .unwrap_or_else(|| panic!("{v} is not inside the forest of {n}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forest_examples() {
        let f = tree_forest(6);
        assert_eq!(f.roots, vec![VertexId::tree(4, 2), VertexId::tree(6, 1)]);
        assert_eq!(f.tree_sizes, vec![4, 2]);
        assert_eq!(nextroot(6), VertexId::tree(8, 3));
        assert_eq!(nextpower(6), VertexId::tree(8, 0));
        assert_eq!(nextroot(1), VertexId::tree(1, 0));
        assert_eq!(nextroot(8), VertexId::tree(8, 3));
    }

    #[test]
    fn forest_sizes_follow_binary_representation() {
        for n in 1..=4096u64 {
            let f = tree_forest(n);
            assert_eq!(f.roots.len() as u32, popcount(n));
            assert_eq!(f.tree_sizes.iter().sum::<u64>(), n);
            assert!(f.tree_sizes.windows(2).all(|w| w[0] > w[1]));
            assert!(f.tree_sizes.iter().all(|s| s.is_power_of_two()));
        }
    }

    #[test]
    fn parents_and_paths() {
        assert_eq!(tree_parent(VertexId::tree(5, 0)), VertexId::tree(6, 1));
        assert_eq!(tree_parent(VertexId::tree(6, 1)), VertexId::tree(8, 2));
        assert_eq!(tree_parent(VertexId::tree(4, 2)), VertexId::tree(8, 3));
        for v in [
            VertexId::tree(12, 2),
            VertexId::tree(7, 0),
            VertexId::tree(16, 4),
        ] {
            assert!(tree_children(tree_parent(v)).contains(&v));
        }
        assert_eq!(
            tree_path(VertexId::tree(8, 3), VertexId::tree(6, 0)),
            vec![
                VertexId::tree(8, 3),
                VertexId::tree(8, 2),
                VertexId::tree(6, 1),
                VertexId::tree(6, 0)
            ]
        );
        assert_eq!(covering_root(6, VertexId::tree(3, 0)), VertexId::tree(4, 2));
    }
}
