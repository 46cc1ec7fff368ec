//! Vertex identities shared by every scheme graph.
//!
//! The canonical encoding is `kind (1 octet) || a (8 octets BE) || b (8 octets BE)`.
//! The total order on vertices is the lexicographic order of that encoding,
//! which coincides with the derived `Ord` on `(kind, a, b)`.

use std::fmt;

use thiserror::Error;

pub const VERTEX_ENCODED_LEN: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum VertexKind {
    /// Item slot `n`.
    Sink = 0,
    /// Chain vertex `p_n` of the linking schemes built on a linked list.
    Chain = 1,
    /// Merkle tree vertex `(n, k)` with `2^k | n`.
    Tree = 2,
    /// Hypercore digest vertex `d_n`.
    HyperDigest = 3,
    /// The `j`-th parent created for length `n` in a transparency log.
    CtInternal = 4,
}

impl VertexKind {
    pub fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => Self::Sink,
            1 => Self::Chain,
            2 => Self::Tree,
            3 => Self::HyperDigest,
            4 => Self::CtInternal,
            _ => return None,
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VertexDecodeError {
    #[error("vertex encoding must be {VERTEX_ENCODED_LEN} octets, got {0}")]
    Length(usize),
    #[error("unknown vertex kind tag {0}")]
    Kind(u8),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub kind: VertexKind,
    pub a: u64,
    pub b: u64,
}

impl VertexId {
    pub const fn sink(n: u64) -> Self {
        VertexId {
            kind: VertexKind::Sink,
            a: n,
            b: 0,
        }
    }

    pub const fn chain(n: u64) -> Self {
        VertexId {
            kind: VertexKind::Chain,
            a: n,
            b: 0,
        }
    }

    pub const fn tree(n: u64, k: u64) -> Self {
        VertexId {
            kind: VertexKind::Tree,
            a: n,
            b: k,
        }
    }

    pub const fn hyper_digest(n: u64) -> Self {
        VertexId {
            kind: VertexKind::HyperDigest,
            a: n,
            b: 0,
        }
    }

    pub const fn ct_internal(n: u64, j: u64) -> Self {
        VertexId {
            kind: VertexKind::CtInternal,
            a: n,
            b: j,
        }
    }

    pub fn is_sink(&self) -> bool {
        self.kind == VertexKind::Sink
    }

    pub fn encode(&self) -> [u8; VERTEX_ENCODED_LEN] {
        let mut out = [0u8; VERTEX_ENCODED_LEN];
        out[0] = self.kind as u8;
        out[1..9].copy_from_slice(&self.a.to_be_bytes());
        out[9..17].copy_from_slice(&self.b.to_be_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, VertexDecodeError> {
        if bytes.len() != VERTEX_ENCODED_LEN {
            return Err(VertexDecodeError::Length(bytes.len()));
        }
        let kind = VertexKind::from_tag(bytes[0]).ok_or(VertexDecodeError::Kind(bytes[0]))?;
        let a = u64::from_be_bytes(bytes[1..9].try_into().unwrap());
        let b = u64::from_be_bytes(bytes[9..17].try_into().unwrap());
        Ok(VertexId { kind, a, b })
    }
}

/// Renders vertices with the names used in the literature: `n`, `p_n`,
/// `(n,k)`, `d_n`, and `c_n.j`.
impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VertexKind::Sink => write!(f, "{}", self.a),
            VertexKind::Chain => write!(f, "p{}", self.a),
            VertexKind::Tree => write!(f, "({},{})", self.a, self.b),
            VertexKind::HyperDigest => write!(f, "d{}", self.a),
            VertexKind::CtInternal => write!(f, "c{}.{}", self.a, self.b),
        }
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorts a vertex set into its canonical sequence.
pub fn canonical_sequence<I>(vertices: I) -> Vec<VertexId>
where
    I: IntoIterator<Item = VertexId>,
{
    let mut out: Vec<VertexId> = vertices.into_iter().collect();
    out.sort_unstable();
    out.dedup();
    out
}
