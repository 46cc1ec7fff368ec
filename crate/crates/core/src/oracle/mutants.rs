use std::collections::BTreeSet;

use crate::hashcore::{Dag, PathFamily};
use crate::schemes::{SchemeGraph, SchemeId, Threading, TreeFlavor, TreeScheme};
use crate::vertex::VertexId;

/// Deliberately broken graph variants, one per contract clause. Each should
/// be caught by the oracle under the invariant named by
/// [`Mutation::invariant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Threaded tree whose leaves link to the forest that already contains
    /// them.
    CyclicThreading,
    /// Sinks past the first get an outgoing edge to the previous sink.
    SinkWithEdge,
    /// The commit vertex of `n` is that of `n - 1`.
    LooseCommit,
    /// The dock is just the newest sink.
    WeakDock,
    /// Certify paths are cut down to the commit vertex.
    ShortCertify,
    /// Digest pools are empty.
    ThinDigestPool,
    /// Certificate pools hold only the newest sink.
    ThinCertificatePool,
    /// Identifier paths start at the first sink.
    DetachedIdentifier,
}

impl Mutation {
    pub const ALL: [Mutation; 8] = [
        Mutation::CyclicThreading,
        Mutation::SinkWithEdge,
        Mutation::LooseCommit,
        Mutation::WeakDock,
        Mutation::ShortCertify,
        Mutation::ThinDigestPool,
        Mutation::ThinCertificatePool,
        Mutation::DetachedIdentifier,
    ];

    /// Oracle invariant that must flag this mutation.
    pub fn invariant(self) -> &'static str {
        match self {
            Mutation::CyclicThreading => "acyclic",
            Mutation::SinkWithEdge => "sinks",
            Mutation::LooseCommit => "tight-commitment",
            Mutation::WeakDock => "dock",
            Mutation::ShortCertify => "gcertify",
            Mutation::ThinDigestPool => "digest-pool",
            Mutation::ThinCertificatePool => "certificate-pool",
            Mutation::DetachedIdentifier => "identifier",
        }
    }

    /// The broken graph, built over `base` where the mutation is a wrapper.
    pub fn apply(self, base: SchemeId) -> Box<dyn SchemeGraph> {
        match self {
            Mutation::CyclicThreading => {
                Box::new(TreeScheme::new(TreeFlavor::Threaded(Threading::Current)))
            }
            m => Box::new(Mutant {
                inner: base.graph(),
                mutation: m,
            }),
        }
    }
}

/// A scheme with one clause of the contract broken.
pub struct Mutant {
    inner: Box<dyn SchemeGraph>,
    mutation: Mutation,
}

impl Mutant {
    pub fn new(inner: Box<dyn SchemeGraph>, mutation: Mutation) -> Self {
        Mutant { inner, mutation }
    }
}

impl Dag for Mutant {
    fn contains(&self, v: VertexId) -> bool {
        self.inner.contains(v)
    }

    fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        if self.mutation == Mutation::SinkWithEdge && v.is_sink() && v.a >= 2 {
            return vec![VertexId::sink(v.a - 1)];
        }
        self.inner.out_neighbors(v)
    }
}

impl SchemeGraph for Mutant {
    fn id(&self) -> SchemeId {
        self.inner.id()
    }

    fn name(&self) -> String {
        format!("{}-{:?}", self.inner.name(), self.mutation)
    }

    fn gcommit(&self, n: u64) -> VertexId {
        match self.mutation {
            Mutation::LooseCommit => self.inner.gcommit(n.saturating_sub(1).max(1)),
            _ => self.inner.gcommit(n),
        }
    }

    fn dock(&self, n: u64) -> BTreeSet<VertexId> {
        match self.mutation {
            Mutation::WeakDock => [VertexId::sink(n)].into_iter().collect(),
            _ => self.inner.dock(n),
        }
    }

    fn gcertify(&self, ls: u64, lt: u64) -> PathFamily {
        match self.mutation {
            Mutation::ShortCertify => PathFamily::trivial(self.gcommit(lt)),
            _ => self.inner.gcertify(ls, lt),
        }
    }

    fn gcertify_many(&self, lt: u64, prefixes: &[u64]) -> Vec<PathFamily> {
        match self.mutation {
            Mutation::ShortCertify => prefixes.iter().map(|&ls| self.gcertify(ls, lt)).collect(),
            _ => self.inner.gcertify_many(lt, prefixes),
        }
    }

    fn certificate_pool(&self, n: u64) -> BTreeSet<VertexId> {
        match self.mutation {
            Mutation::ThinCertificatePool => [VertexId::sink(n)].into_iter().collect(),
            _ => self.inner.certificate_pool(n),
        }
    }

    fn digest_pool(&self, n: u64) -> Vec<VertexId> {
        match self.mutation {
            Mutation::ThinDigestPool => Vec::new(),
            _ => self.inner.digest_pool(n),
        }
    }

    fn identifier_paths(&self, n: u64) -> PathFamily {
        match self.mutation {
            Mutation::DetachedIdentifier => PathFamily::trivial(VertexId::sink(1)),
            _ => self.inner.identifier_paths(n),
        }
    }
}
