//! Prefix authentication over a scheme graph: commit, append, certify,
//! verify, positional certificates, and timestamping.

mod types;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::hash::{Hasher, Label};
use crate::hashcore::{
    frontier, LabelFrom, Labeler, Labeling, MerkleError, SinkLabels, SubgraphProof,
};
use crate::schemes::{SchemeGraph, SchemeId};
use crate::vertex::VertexId;

pub use types::{
    CommitState, Digest, Identifier, PositionalCertificate, PrefixCertificate,
    TimestampCertificate, FORMAT_VERSION,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PasError {
    #[error("length must be >= 1")]
    EmptySequence,
    #[error("not a proper prefix: {len_s} >= {len_t}")]
    NotAProperPrefix { len_s: u64, len_t: u64 },
    #[error("position {position} out of range 1..={len}")]
    OutOfRange { position: u64, len: u64 },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("corrupt commit state: {0}")]
    CorruptState(String),
    #[error("insufficient pool: cannot derive the label of {0}")]
    InsufficientPool(VertexId),
    #[error(transparent)]
    Merkle(#[from] MerkleError),
}

pub type Result<T> = std::result::Result<T, PasError>;

/// Sink labels of a sequence; sinks past its end hash the empty payload.
struct SequenceSinks {
    items: Vec<Label>,
    padding: Label,
}

impl SinkLabels for SequenceSinks {
    fn sink_label(&self, v: VertexId) -> Option<Label> {
        if !v.is_sink() || v.a == 0 {
            return None;
        }
        Some(*self.items.get(v.a as usize - 1).unwrap_or(&self.padding))
    }
}

/// A prefix authentication scheme: a scheme graph plus a hash function.
pub struct Pas {
    graph: Box<dyn SchemeGraph>,
    hasher: Hasher,
}

impl Pas {
    pub fn new(scheme: SchemeId) -> Self {
        Pas::with_hasher(scheme, Hasher::default())
    }

    pub fn with_hasher(scheme: SchemeId, hasher: Hasher) -> Self {
        Pas::from_graph(scheme.graph(), hasher)
    }

    /// Uses any graph implementing the contract, e.g. a measurement variant.
    pub fn from_graph(graph: Box<dyn SchemeGraph>, hasher: Hasher) -> Self {
        Pas { graph, hasher }
    }

    pub fn scheme(&self) -> SchemeId {
        self.graph.id()
    }

    pub fn graph(&self) -> &dyn SchemeGraph {
        self.graph.as_ref()
    }

    pub fn hasher(&self) -> &Hasher {
        &self.hasher
    }

    /// Label width in bytes.
    pub fn k(&self) -> usize {
        self.hasher.k()
    }

    /// Labels a fixed sequence once and answers many queries about it.
    pub fn prover<T: AsRef<[u8]>>(&self, items: &[T]) -> Prover<'_> {
        let sinks = SequenceSinks {
            items: items
                .iter()
                .map(|i| self.hasher.sink_label(i.as_ref()))
                .collect(),
            padding: self.hasher.sink_label(&[]),
        };
        Prover {
            pas: self,
            len: items.len() as u64,
            labeler: Labeler::new(self.graph.as_ref(), sinks, self.hasher.clone()),
        }
    }

    pub fn commit<T: AsRef<[u8]>>(&self, items: &[T]) -> Result<Digest> {
        self.prover(items).digest(items.len() as u64)
    }

    /// Digests of every non-empty prefix. Commit vertices are tight, so one
    /// labeling of the whole sequence serves every prefix.
    pub fn commit_all<T: AsRef<[u8]>>(&self, items: &[T]) -> Result<Vec<Digest>> {
        let mut prover = self.prover(items);
        (1..=items.len() as u64).map(|n| prover.digest(n)).collect()
    }

    pub fn empty_state(&self) -> CommitState {
        CommitState::empty(self.scheme())
    }

    /// Appends one item using only the digest pool of the previous length.
    pub fn sparse_commit(&self, state: &CommitState, item: &[u8]) -> Result<(Digest, CommitState)> {
        if state.scheme != self.scheme() {
            return Err(PasError::CorruptState(format!(
                "state belongs to {}, not {}",
                state.scheme,
                self.scheme()
            )));
        }
        let expected = self.pool_vertices(state.length);
        let actual: Vec<VertexId> = state.pool.iter().map(|(v, _)| *v).collect();
        if expected != actual {
            return Err(PasError::CorruptState(format!(
                "pool vertices differ from the digest pool of length {}",
                state.length
            )));
        }
        if state.pool.iter().any(|(_, l)| l.len() != self.k()) {
            return Err(PasError::CorruptState("label width mismatch".into()));
        }
        let n = state.length + 1;
        let mut known: Labeling = state.pool.iter().copied().collect();
        known.insert(VertexId::sink(n), self.hasher.sink_label(item));
        let mut eval = LabelFrom::new(self.graph.as_ref(), &known, self.hasher.clone());
        let mut label = |v: VertexId| {
            eval.label(v).map_err(|e| match e {
                MerkleError::Underdetermined { .. } => PasError::InsufficientPool(v),
                e => e.into(),
            })
        };
        let digest = Digest {
            scheme: self.scheme(),
            length: n,
            label: label(self.graph.gcommit(n))?,
        };
        let pool = self
            .graph
            .digest_pool(n)
            .into_iter()
            .map(|v| label(v).map(|l| (v, l)))
            .collect::<Result<Vec<_>>>()?;
        Ok((
            digest,
            CommitState {
                scheme: self.scheme(),
                length: n,
                pool,
            },
        ))
    }

    fn pool_vertices(&self, n: u64) -> Vec<VertexId> {
        if n == 0 {
            Vec::new()
        } else {
            self.graph.digest_pool(n)
        }
    }

    pub fn certify<T: AsRef<[u8]>>(&self, t_items: &[T], len_s: u64) -> Result<PrefixCertificate> {
        self.prover(t_items).certify(len_s)
    }

    pub fn positional_certificate<T: AsRef<[u8]>>(
        &self,
        items: &[T],
        n: u64,
    ) -> Result<PositionalCertificate> {
        self.prover(items).positional_certificate(n)
    }

    /// Vertex set of a positional certificate: the frontier of the
    /// certificate pool, from which the whole pool neighborhood follows.
    pub fn positional_vertices(&self, n: u64) -> BTreeSet<VertexId> {
        frontier(self.graph.as_ref(), &self.graph.certificate_pool(n))
    }

    /// Vertices whose labels a prefix certificate carries.
    pub fn certificate_vertices(&self, len_s: u64, len_t: u64) -> Result<BTreeSet<VertexId>> {
        check_pair(len_s, len_t)?;
        Ok(self
            .graph
            .gcertify(len_s, len_t)
            .open_neighborhood(self.graph.as_ref()))
    }

    /// Boundary vertices of the identifier paths, minus the item's sink.
    pub fn identifier_vertices(&self, position: u64) -> BTreeSet<VertexId> {
        let mut out = self
            .graph
            .identifier_paths(position)
            .open_neighborhood(self.graph.as_ref());
        out.remove(&VertexId::sink(position));
        out
    }

    /// Builds the certificate for `(pc_s.n, pc_t.n)` from two positional
    /// certificates alone.
    pub fn certify_from_pools(
        &self,
        pc_s: &PositionalCertificate,
        pc_t: &PositionalCertificate,
    ) -> Result<PrefixCertificate> {
        if pc_s.scheme != self.scheme() || pc_t.scheme != self.scheme() {
            return Err(PasError::ContextMismatch("scheme differs".into()));
        }
        check_pair(pc_s.n, pc_t.n)?;
        let mut known = pc_s.labels.clone();
        known.extend(pc_t.labels.iter().map(|(v, l)| (*v, *l)));
        let mut eval = LabelFrom::new(self.graph.as_ref(), &known, self.hasher.clone());
        let labels = self
            .certificate_vertices(pc_s.n, pc_t.n)?
            .into_iter()
            .map(|v| {
                eval.label(v).map_err(|e| match e {
                    MerkleError::Underdetermined { .. } => PasError::InsufficientPool(v),
                    e => e.into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PrefixCertificate {
            scheme: self.scheme(),
            len_s: pc_s.n,
            len_t: pc_t.n,
            labels,
        })
    }

    /// `Ok(true)` iff the certificate proves the sequence behind `d_s` is a
    /// prefix of the one behind `d_t`. Structural problems are errors, never
    /// `Ok(false)`.
    pub fn verify(&self, d_s: &Digest, d_t: &Digest, cert: &PrefixCertificate) -> Result<bool> {
        let scheme = self.scheme();
        if d_s.scheme != scheme || d_t.scheme != scheme || cert.scheme != scheme {
            return Err(PasError::ContextMismatch("scheme differs".into()));
        }
        if d_s.length != cert.len_s || d_t.length != cert.len_t {
            return Err(PasError::ContextMismatch(format!(
                "digests cover ({}, {}), certificate covers ({}, {})",
                d_s.length, d_t.length, cert.len_s, cert.len_t
            )));
        }
        check_pair(cert.len_s, cert.len_t).map_err(|e| PasError::Malformed(e.to_string()))?;
        let k = self.k();
        if d_s.label.len() != k || d_t.label.len() != k || cert.labels.iter().any(|l| l.len() != k)
        {
            return Err(PasError::Malformed("label width mismatch".into()));
        }
        let vertices = self.certificate_vertices(cert.len_s, cert.len_t)?;
        if vertices.len() != cert.labels.len() {
            return Err(PasError::Malformed(format!(
                "{} labels, expected {}",
                cert.labels.len(),
                vertices.len()
            )));
        }
        let known: Labeling = vertices
            .into_iter()
            .zip(cert.labels.iter().copied())
            .collect();
        let mut eval = LabelFrom::new(self.graph.as_ref(), &known, self.hasher.clone());
        let mut label = |v: VertexId| {
            eval.label(v).map_err(|e| match e {
                MerkleError::Underdetermined { .. } => {
                    PasError::Malformed(format!("labels do not determine {v}"))
                }
                e => e.into(),
            })
        };
        let t_ok = label(self.graph.gcommit(cert.len_t))? == d_t.label;
        let s_ok = label(self.graph.gcommit(cert.len_s))? == d_s.label;
        Ok(t_ok && s_ok)
    }

    pub fn identify<T: AsRef<[u8]>>(&self, items: &[T], position: u64) -> Result<Identifier> {
        self.prover(items).identify(position)
    }

    /// Checks that `id` places its item at `d.length` within the sequence
    /// behind `d`.
    pub fn verify_identifier(&self, d: &Digest, id: &Identifier) -> Result<bool> {
        if d.scheme != self.scheme() || id.scheme != self.scheme() {
            return Err(PasError::ContextMismatch("scheme differs".into()));
        }
        if d.length != id.position {
            return Err(PasError::ContextMismatch(format!(
                "digest covers {}, identifier names position {}",
                d.length, id.position
            )));
        }
        let k = self.k();
        if d.label.len() != k
            || id.item_hash.len() != k
            || id.boundary.values().any(|l| l.len() != k)
        {
            return Err(PasError::Malformed("label width mismatch".into()));
        }
        let mut boundary = id.boundary.clone();
        boundary.insert(VertexId::sink(id.position), id.item_hash);
        let proof = SubgraphProof {
            root: self.graph.gcommit(id.position),
            claimed_root_label: d.label,
            paths: self.graph.identifier_paths(id.position),
            boundary,
        };
        proof
            .verify(self.graph.as_ref(), &self.hasher)
            .map_err(|e| match e {
                MerkleError::MalformedProof(m) => PasError::Malformed(m),
                e => e.into(),
            })
    }

    /// Certificate that the last item of `s` precedes the last item of `t`.
    pub fn timestamp_certify<S, T>(
        &self,
        s_items: &[S],
        t_items: &[T],
    ) -> Result<TimestampCertificate>
    where
        S: AsRef<[u8]>,
        T: AsRef<[u8]>,
    {
        let len_s = s_items.len() as u64;
        let len_t = t_items.len() as u64;
        check_pair(len_s, len_t)?;
        if s_items
            .iter()
            .zip(t_items)
            .any(|(a, b)| a.as_ref() != b.as_ref())
        {
            return Err(PasError::NotAProperPrefix { len_s, len_t });
        }
        let mut prover = self.prover(t_items);
        Ok(TimestampCertificate {
            prefix: prover.certify(len_s)?,
            id_s: prover.identify(len_s)?,
            id_t: prover.identify(len_t)?,
        })
    }

    pub fn timestamp_verify(
        &self,
        d_s: &Digest,
        d_t: &Digest,
        tc: &TimestampCertificate,
    ) -> Result<bool> {
        if tc.id_s.position != tc.prefix.len_s || tc.id_t.position != tc.prefix.len_t {
            return Ok(false);
        }
        Ok(self.verify(d_s, d_t, &tc.prefix)?
            && self.verify_identifier(d_s, &tc.id_s)?
            && self.verify_identifier(d_t, &tc.id_t)?)
    }
}

fn check_pair(len_s: u64, len_t: u64) -> Result<()> {
    if len_s == 0 {
        return Err(PasError::EmptySequence);
    }
    if len_s >= len_t {
        return Err(PasError::NotAProperPrefix { len_s, len_t });
    }
    Ok(())
}

/// Memoized labeling of one sequence.
pub struct Prover<'p> {
    pas: &'p Pas,
    len: u64,
    labeler: Labeler<'p, dyn SchemeGraph, SequenceSinks>,
}

impl<'p> Prover<'p> {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn graph(&self) -> &'p dyn SchemeGraph {
        self.pas.graph.as_ref()
    }

    fn check_position(&self, position: u64) -> Result<()> {
        if self.len == 0 {
            return Err(PasError::EmptySequence);
        }
        if position == 0 || position > self.len {
            return Err(PasError::OutOfRange {
                position,
                len: self.len,
            });
        }
        Ok(())
    }

    pub fn label(&mut self, v: VertexId) -> Result<Label> {
        Ok(self.labeler.label(v)?)
    }

    /// Digest of the prefix of length `n`.
    pub fn digest(&mut self, n: u64) -> Result<Digest> {
        self.check_position(n)?;
        Ok(Digest {
            scheme: self.pas.scheme(),
            length: n,
            label: self.label(self.graph().gcommit(n))?,
        })
    }

    /// Commit state after the first `n` items.
    pub fn state(&mut self, n: u64) -> Result<CommitState> {
        if n > 0 {
            self.check_position(n)?;
        }
        let pool = self
            .pas
            .pool_vertices(n)
            .into_iter()
            .map(|v| self.label(v).map(|l| (v, l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CommitState {
            scheme: self.pas.scheme(),
            length: n,
            pool,
        })
    }

    /// Certificate that the first `len_s` items are a prefix of the whole
    /// sequence.
    pub fn certify(&mut self, len_s: u64) -> Result<PrefixCertificate> {
        let len_t = self.len;
        let vertices = self.pas.certificate_vertices(len_s, len_t)?;
        assert!(
            vertices.iter().all(|v| !v.is_sink() || v.a <= len_t),
            "certificate references a sink past the sequence"
        );
        let labels = vertices
            .into_iter()
            .map(|v| self.label(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrefixCertificate {
            scheme: self.pas.scheme(),
            len_s,
            len_t,
            labels,
        })
    }

    /// Positional certificate of length `n`, labeled within this sequence.
    pub fn positional_certificate(&mut self, n: u64) -> Result<PositionalCertificate> {
        self.check_position(n)?;
        let labels = self
            .pas
            .positional_vertices(n)
            .into_iter()
            .map(|v| self.label(v).map(|l| (v, l)))
            .collect::<Result<Labeling>>()?;
        Ok(PositionalCertificate {
            scheme: self.pas.scheme(),
            n,
            labels,
        })
    }

    pub fn identify(&mut self, position: u64) -> Result<Identifier> {
        self.check_position(position)?;
        let sink = VertexId::sink(position);
        let item_hash = self.label(sink)?;
        let boundary = self
            .pas
            .identifier_vertices(position)
            .into_iter()
            .map(|v| self.label(v).map(|l| (v, l)))
            .collect::<Result<Labeling>>()?;
        Ok(Identifier {
            scheme: self.pas.scheme(),
            position,
            item_hash,
            boundary,
        })
    }
}
