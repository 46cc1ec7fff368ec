//! Merkle DAG labeling, determination, and subgraph proofs, independent of
//! any particular scheme.

mod dag;
mod label;
mod proof;

use thiserror::Error;

use crate::vertex::VertexId;

pub use dag::{
    closed_neighborhood, frontier, open_neighborhood, reach, Dag, ExplicitDag, PathFamily,
};
pub use label::{
    determines, label_from, label_of, Determiner, LabelFrom, Labeler, Labeling, SinkFn, SinkLabels,
};
pub use proof::SubgraphProof;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MerkleError {
    #[error("no such vertex: {0}")]
    NoSuchVertex(VertexId),
    #[error("cycle through {0}")]
    Cycle(VertexId),
    #[error("no label supplied for sink {0}")]
    MissingSinkLabel(VertexId),
    #[error("underdetermined vertex: maximal path {witness:?} avoids the labeling")]
    Underdetermined { witness: Vec<VertexId> },
    #[error("malformed proof: {0}")]
    MalformedProof(String),
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::hash::{Hasher, Label};

    fn sink_labels(h: &Hasher, n: u64) -> Labeling {
        (1..=n)
            .map(|i| (VertexId::sink(i), h.sink_label(&i.to_be_bytes())))
            .collect()
    }

    // The shape of the worked subgraph-proof example: paths (g, d) and
    // (g, f, e); boundary {a, b, c, h}.
    struct Worked {
        dag: ExplicitDag,
        a: VertexId,
        b: VertexId,
        c: VertexId,
        d: VertexId,
        e: VertexId,
        f: VertexId,
        g: VertexId,
        h: VertexId,
    }

    fn worked() -> Worked {
        let (a, b, c, h) = (
            VertexId::sink(1),
            VertexId::sink(2),
            VertexId::sink(3),
            VertexId::sink(4),
        );
        let (d, e, f, g) = (
            VertexId::chain(1),
            VertexId::chain(2),
            VertexId::chain(3),
            VertexId::chain(4),
        );
        let dag = ExplicitDag::from_edges([(d, a), (e, b), (e, c), (f, e), (g, d), (g, f), (g, h)]);
        Worked {
            dag,
            a,
            b,
            c,
            d,
            e,
            f,
            g,
            h,
        }
    }

    #[test]
    fn sink_and_unary_labels() {
        let h = Hasher::default();
        let sinks = sink_labels(&h, 1);
        let dag = ExplicitDag::from_edges([(VertexId::chain(1), VertexId::sink(1))]);
        let s = label_of(&dag, VertexId::sink(1), &sinks, &h).unwrap();
        assert_eq!(s, sinks[&VertexId::sink(1)]);
        let p = label_of(&dag, VertexId::chain(1), &sinks, &h).unwrap();
        assert_eq!(p, h.inner_label([&s]));
    }

    #[test]
    fn missing_vertex_and_missing_sink_label() {
        let h = Hasher::default();
        let dag = ExplicitDag::from_edges([(VertexId::chain(1), VertexId::sink(1))]);
        assert_eq!(
            label_of(&dag, VertexId::chain(9), Labeling::new(), &h),
            Err(MerkleError::NoSuchVertex(VertexId::chain(9)))
        );
        assert_eq!(
            label_of(&dag, VertexId::chain(1), Labeling::new(), &h),
            Err(MerkleError::MissingSinkLabel(VertexId::sink(1)))
        );
    }

    #[test]
    fn cycles_are_reported() {
        let h = Hasher::default();
        let (x, y) = (VertexId::chain(1), VertexId::chain(2));
        let dag = ExplicitDag::from_edges([(x, y), (y, x)]);
        assert!(matches!(
            label_of(&dag, x, Labeling::new(), &h),
            Err(MerkleError::Cycle(_))
        ));
    }

    #[test]
    fn worked_boundary_determines_and_labels_root() {
        let hs = Hasher::default();
        let w = worked();
        let sinks = sink_labels(&hs, 4);
        let paths = PathFamily::new(w.g, vec![vec![w.g, w.d], vec![w.g, w.f, w.e]]).unwrap();
        let boundary = paths.open_neighborhood(&w.dag);
        assert_eq!(boundary, [w.a, w.b, w.c, w.h].into_iter().collect());
        assert!(determines(&w.dag, &boundary, w.g));

        let mut labeler = Labeler::new(&w.dag, &sinks, hs.clone());
        let p: Labeling = labeler.labels(boundary).unwrap();
        assert_eq!(
            label_from(&w.dag, w.g, &p, &hs).unwrap(),
            labeler.label(w.g).unwrap()
        );
    }

    #[test]
    fn determines_examples() {
        let w = worked();
        assert!(determines(&w.dag, &[w.g].into_iter().collect(), w.g));
        assert!(!determines(&w.dag, &[w.g].into_iter().collect(), w.a));
        // {a, b} misses the maximal path g -> h.
        assert!(!determines(
            &w.dag,
            &[w.a, w.b, w.c].into_iter().collect(),
            w.g
        ));
        assert!(determines(
            &w.dag,
            &[w.d, w.e, w.h].into_iter().collect(),
            w.g
        ));
    }

    #[test]
    fn label_from_direct_lookup_and_underdetermined_witness() {
        let hs = Hasher::default();
        let w = worked();
        let l = hs.sink_label(b"anything");
        let p: Labeling = [(w.g, l)].into_iter().collect();
        assert_eq!(label_from(&w.dag, w.g, &p, &hs).unwrap(), l);

        let p: Labeling = [(w.d, l), (w.e, l)].into_iter().collect();
        match label_from(&w.dag, w.g, &p, &hs) {
            Err(MerkleError::Underdetermined { witness }) => {
                assert_eq!(witness, vec![w.g, w.h]);
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn subgraph_proof_verifies_and_detects_tampering() {
        let hs = Hasher::default();
        let w = worked();
        let sinks = sink_labels(&hs, 4);
        let mut labeler = Labeler::new(&w.dag, &sinks, hs.clone());
        let paths = PathFamily::new(w.g, vec![vec![w.g, w.d], vec![w.g, w.f, w.e]]).unwrap();
        let proof = SubgraphProof::build(&w.dag, paths.clone(), &mut labeler).unwrap();
        assert_eq!(proof.verify(&w.dag, &hs), Ok(true));

        for v in proof.boundary.keys().copied().collect::<Vec<_>>() {
            for i in 0..hs.k() {
                let mut t = proof.clone();
                let l = t.boundary[&v].with_flipped_octet(i, 0x01);
                t.boundary.insert(v, l);
                assert_eq!(t.verify(&w.dag, &hs), Ok(false), "flip {v} octet {i}");
            }
        }

        let enc = proof.encode();
        assert_eq!(enc.len(), 17 + 32 + 4 + 4 * 32);
        let dec = SubgraphProof::decode(&enc, 32, &w.dag, paths).unwrap();
        assert_eq!(dec, proof);
    }

    #[test]
    fn malformed_proofs_are_errors_not_refutations() {
        let hs = Hasher::default();
        let w = worked();
        let sinks = sink_labels(&hs, 4);
        let mut labeler = Labeler::new(&w.dag, &sinks, hs.clone());
        let good = PathFamily::new(w.g, vec![vec![w.g, w.d]]).unwrap();
        let mut proof = SubgraphProof::build(&w.dag, good, &mut labeler).unwrap();

        let mut non_edge = proof.clone();
        non_edge.paths = PathFamily::single(vec![w.g, w.e]);
        assert!(matches!(
            non_edge.verify(&w.dag, &hs),
            Err(MerkleError::MalformedProof(_))
        ));

        proof.boundary.remove(&w.h);
        assert!(matches!(
            proof.verify(&w.dag, &hs),
            Err(MerkleError::MalformedProof(_))
        ));
    }

    #[test]
    fn label_ignores_edge_insertion_order() {
        let hs = Hasher::default();
        let sinks = sink_labels(&hs, 3);
        let root = VertexId::chain(9);
        let edges = [
            (root, VertexId::sink(3)),
            (root, VertexId::sink(1)),
            (root, VertexId::chain(1)),
            (VertexId::chain(1), VertexId::sink(2)),
        ];
        let mut reversed = edges;
        reversed.reverse();
        let a = label_of(&ExplicitDag::from_edges(edges), root, &sinks, &hs).unwrap();
        let b = label_of(&ExplicitDag::from_edges(reversed), root, &sinks, &hs).unwrap();
        assert_eq!(a, b);
    }

    /// Random DAG on vertices 0..m where edges only go from higher to lower
    /// index. Vertices without out-edges are sinks.
    fn random_dag(rng: &mut ChaCha8Rng, m: u64) -> ExplicitDag {
        let mut g = ExplicitDag::new();
        for i in 0..m {
            g.add_vertex(VertexId::chain(i));
            for j in 0..i {
                if rng.gen_bool(0.3) {
                    g.add_edge(VertexId::chain(i), VertexId::chain(j));
                }
            }
        }
        g
    }

    /// Determination by enumerating all maximal paths.
    fn determines_by_paths(g: &ExplicitDag, set: &BTreeSet<VertexId>, v: VertexId) -> bool {
        if set.contains(&v) {
            return true;
        }
        let out = g.out_neighbors(v);
        if out.is_empty() {
            return false;
        }
        out.into_iter().all(|w| determines_by_paths(g, set, w))
    }

    #[test]
    fn label_from_agrees_with_label_of_on_every_determining_subset() {
        let hs = Hasher::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..6 {
            let m = 6 + round;
            let g = random_dag(&mut rng, m);
            let all: Labeling = (0..m)
                .map(|i| (VertexId::chain(i), hs.sink_label(&[i as u8, round as u8])))
                .collect();
            let mut labeler = Labeler::new(&g, &all, hs.clone());
            let truth = labeler.labels(g.vertices()).unwrap();
            let verts: Vec<VertexId> = g.vertices().collect();
            for mask in 0u32..(1 << m) {
                let set: BTreeSet<VertexId> = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect();
                let p: Labeling = set.iter().map(|v| (*v, truth[v])).collect();
                let mut det = Determiner::new(&g, &set);
                for &v in &verts {
                    let d = det.determines(v);
                    assert_eq!(d, determines_by_paths(&g, &set, v));
                    match label_from(&g, v, &p, &hs) {
                        Ok(l) => {
                            assert!(d);
                            assert_eq!(l, truth[&v]);
                        }
                        Err(MerkleError::Underdetermined { witness }) => {
                            assert!(!d);
                            assert!(witness.iter().all(|w| !set.contains(w)));
                            assert_eq!(witness[0], v);
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn determination_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_dag(&mut rng, 12);
            let verts: Vec<VertexId> = g.vertices().collect();
            let small: BTreeSet<VertexId> = verts
                .iter()
                .filter(|_| rng.gen_bool(0.3))
                .copied()
                .collect();
            let mut large = small.clone();
            large.extend(verts.iter().filter(|_| rng.gen_bool(0.3)).copied());
            for &v in &verts {
                if determines(&g, &small, v) {
                    assert!(determines(&g, &large, v));
                }
            }
        }
    }

    #[test]
    fn wider_hashes_work_unchanged() {
        use crate::hash::{HashAlgorithm, HashConfig};
        let hs = Hasher::new(HashConfig::with_algorithm(HashAlgorithm::Sha512));
        let w = worked();
        let sinks = sink_labels(&hs, 4);
        let mut labeler = Labeler::new(&w.dag, &sinks, hs.clone());
        let paths = PathFamily::single(vec![w.g, w.f]);
        let proof = SubgraphProof::build(&w.dag, paths, &mut labeler).unwrap();
        assert_eq!(proof.claimed_root_label.len(), 64);
        assert_eq!(proof.verify(&w.dag, &hs), Ok(true));
        let _: Label = proof.boundary[&w.e];
    }
}
