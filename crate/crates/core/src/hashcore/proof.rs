use std::collections::BTreeSet;

use crate::hash::{Hasher, Label};
use crate::vertex::{VertexId, VERTEX_ENCODED_LEN};

use super::{Dag, LabelFrom, Labeler, Labeling, MerkleError, PathFamily, SinkLabels};

/// A claimed root label together with the labels of the open
/// out-neighborhood of a path family starting at the root.
///
/// Path families never travel on the wire; both sides recompute them from
/// context, so `decode` takes the family as an argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphProof {
    pub root: VertexId,
    pub claimed_root_label: Label,
    pub paths: PathFamily,
    pub boundary: Labeling,
}

impl SubgraphProof {
    /// Honest construction from the true labeling.
    pub fn build<G: Dag + ?Sized, S: SinkLabels>(
        graph: &G,
        paths: PathFamily,
        labeler: &mut Labeler<'_, G, S>,
    ) -> Result<Self, MerkleError> {
        paths.check_edges(graph)?;
        let root = paths.root();
        let claimed_root_label = labeler.label(root)?;
        let boundary = labeler.labels(paths.open_neighborhood(graph))?;
        Ok(SubgraphProof {
            root,
            claimed_root_label,
            paths,
            boundary,
        })
    }

    /// Structural checks: every path starts at the root, every step is an
    /// edge, and the boundary covers exactly the open out-neighborhood.
    pub fn check_structure<G: Dag + ?Sized>(&self, graph: &G) -> Result<(), MerkleError> {
        if self.paths.root() != self.root {
            return Err(MerkleError::MalformedProof(
                "path family does not start at the proof root".into(),
            ));
        }
        self.paths.check_edges(graph)?;
        let expected = self.paths.open_neighborhood(graph);
        let actual: BTreeSet<VertexId> = self.boundary.keys().copied().collect();
        if expected != actual {
            return Err(MerkleError::MalformedProof(format!(
                "boundary covers {} vertices, open out-neighborhood has {}",
                actual.len(),
                expected.len()
            )));
        }
        let k = self.claimed_root_label.len();
        if self.boundary.values().any(|l| l.len() != k) {
            return Err(MerkleError::MalformedProof("mixed label widths".into()));
        }
        Ok(())
    }

    /// `Ok(true)` for a verified proof, `Ok(false)` for a refuted one.
    pub fn verify<G: Dag + ?Sized>(&self, graph: &G, hasher: &Hasher) -> Result<bool, MerkleError> {
        self.check_structure(graph)?;
        if self.claimed_root_label.len() != hasher.k() {
            return Err(MerkleError::MalformedProof("label width mismatch".into()));
        }
        let mut eval = LabelFrom::new(graph, &self.boundary, hasher.clone());
        match eval.label(self.root) {
            Ok(l) => Ok(l == self.claimed_root_label),
            Err(MerkleError::Underdetermined { witness }) => Err(MerkleError::MalformedProof(
                format!("boundary does not determine the root (path {witness:?})"),
            )),
            Err(e) => Err(e),
        }
    }

    /// `root || claimed root label || count (u32 BE) || boundary labels`,
    /// boundary in canonical vertex order.
    pub fn encode(&self) -> Vec<u8> {
        let k = self.claimed_root_label.len();
        let mut out = Vec::with_capacity(VERTEX_ENCODED_LEN + k + 4 + self.boundary.len() * k);
        out.extend_from_slice(&self.root.encode());
        out.extend_from_slice(self.claimed_root_label.as_bytes());
        out.extend_from_slice(&(self.boundary.len() as u32).to_be_bytes());
        for l in self.boundary.values() {
            out.extend_from_slice(l.as_bytes());
        }
        out
    }

    pub fn decode<G: Dag + ?Sized>(
        bytes: &[u8],
        k: usize,
        graph: &G,
        paths: PathFamily,
    ) -> Result<Self, MerkleError> {
        let malformed = |m: &str| MerkleError::MalformedProof(m.to_string());
        if bytes.len() < VERTEX_ENCODED_LEN + k + 4 {
            return Err(malformed("truncated subgraph proof"));
        }
        let root = VertexId::decode(&bytes[..VERTEX_ENCODED_LEN])
            .map_err(|e| MerkleError::MalformedProof(e.to_string()))?;
        if root != paths.root() {
            return Err(malformed("encoded root differs from path family root"));
        }
        let mut at = VERTEX_ENCODED_LEN;
        let claimed_root_label = Label::from_slice(&bytes[at..at + k])
            .map_err(|e| MerkleError::MalformedProof(e.to_string()))?;
        at += k;
        let count = u32::from_be_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
        at += 4;
        let vertices = paths.open_neighborhood(graph);
        if count != vertices.len() || bytes.len() - at != count * k {
            return Err(malformed("boundary count does not match path family"));
        }
        let boundary = vertices
            .into_iter()
            .zip(bytes[at..].chunks_exact(k))
            .map(|(v, c)| Label::from_slice(c).map(|l| (v, l)))
            .collect::<Result<Labeling, _>>()
            .map_err(|e| MerkleError::MalformedProof(e.to_string()))?;
        Ok(SubgraphProof {
            root,
            claimed_root_label,
            paths,
            boundary,
        })
    }
}
