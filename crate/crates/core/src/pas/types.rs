//! Value types and their wire formats. All integers are big-endian and
//! every encoding starts with the format version octet.

use crate::hash::Label;
use crate::hashcore::Labeling;
use crate::schemes::SchemeId;
use crate::vertex::VertexId;

use super::PasError;

pub const FORMAT_VERSION: u8 = 0x01;

/// A commitment to a sequence of a known length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Digest {
    pub scheme: SchemeId,
    pub length: u64,
    pub label: Label,
}

/// Labels of the boundary of the certify paths for `(len_s, len_t)`, in
/// canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCertificate {
    pub scheme: SchemeId,
    pub len_s: u64,
    pub len_t: u64,
    pub labels: Vec<Label>,
}

/// Everything needed to append one more item: the labels of the digest
/// pool of the current length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitState {
    pub scheme: SchemeId,
    pub length: u64,
    pub pool: Vec<(VertexId, Label)>,
}

/// Labels from which any certificate involving length `n` can be derived
/// together with the positional certificate of the other length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalCertificate {
    pub scheme: SchemeId,
    pub n: u64,
    pub labels: Labeling,
}

/// Proof that an item sits at a position: the boundary of the identifier
/// paths from the commit vertex of `position`, minus the item's own sink,
/// whose label is `item_hash`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identifier {
    pub scheme: SchemeId,
    pub position: u64,
    pub item_hash: Label,
    pub boundary: Labeling,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimestampCertificate {
    pub prefix: PrefixCertificate,
    pub id_s: Identifier,
    pub id_t: Identifier,
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], what: &'static str) -> Self {
        Reader { bytes, at: 0, what }
    }

    fn err(&self, msg: &str) -> PasError {
        PasError::Malformed(format!("{}: {msg}", self.what))
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], PasError> {
        if self.bytes.len() - self.at < n {
            return Err(self.err("truncated"));
        }
        let out = &self.bytes[self.at..self.at + n];
        self.at += n;
        Ok(out)
    }

    fn header(&mut self) -> Result<SchemeId, PasError> {
        let v = self.take(1)?[0];
        if v != FORMAT_VERSION {
            return Err(self.err(&format!("unsupported format version {v:#04x}")));
        }
        let s = self.take(1)?[0];
        SchemeId::from_wire(s).map_err(|e| self.err(&e.to_string()))
    }

    fn u64(&mut self) -> Result<u64, PasError> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, PasError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn label(&mut self, k: usize) -> Result<Label, PasError> {
        let b = self.take(k)?;
        Label::from_slice(b).map_err(|e| self.err(&e.to_string()))
    }

    /// `count` labels filling the rest of the input exactly.
    fn labels(&mut self, count: usize, k: usize) -> Result<Vec<Label>, PasError> {
        if self.bytes.len() - self.at != count.saturating_mul(k) {
            return Err(self.err("label count does not match length"));
        }
        (0..count).map(|_| self.label(k)).collect()
    }

    fn finish(&self) -> Result<(), PasError> {
        if self.at != self.bytes.len() {
            return Err(self.err("trailing bytes"));
        }
        Ok(())
    }
}

fn header(out: &mut Vec<u8>, scheme: SchemeId) {
    out.push(FORMAT_VERSION);
    out.push(scheme.wire());
}

fn check_width(k: usize) -> Result<(), PasError> {
    if k == 0 || k > 64 {
        return Err(PasError::Malformed(format!("label width {k} out of range")));
    }
    Ok(())
}

impl Digest {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(10 + self.label.len());
        header(&mut out, self.scheme);
        out.extend_from_slice(&self.length.to_be_bytes());
        out.extend_from_slice(self.label.as_bytes());
        out
    }

    /// The label width is whatever follows the fixed header.
    pub fn decode(bytes: &[u8]) -> Result<Self, PasError> {
        let mut r = Reader::new(bytes, "digest");
        let scheme = r.header()?;
        let length = r.u64()?;
        let k = bytes.len().saturating_sub(10);
        check_width(k)?;
        let label = r.label(k)?;
        r.finish()?;
        if length == 0 {
            return Err(r.err("length 0"));
        }
        Ok(Digest {
            scheme,
            length,
            label,
        })
    }
}

impl PrefixCertificate {
    pub fn encode(&self) -> Vec<u8> {
        let k = self.labels.first().map_or(0, |l| l.len());
        let mut out = Vec::with_capacity(22 + self.labels.len() * k);
        header(&mut out, self.scheme);
        out.extend_from_slice(&self.len_s.to_be_bytes());
        out.extend_from_slice(&self.len_t.to_be_bytes());
        out.extend_from_slice(&(self.labels.len() as u32).to_be_bytes());
        for l in &self.labels {
            out.extend_from_slice(l.as_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8], k: usize) -> Result<Self, PasError> {
        check_width(k)?;
        let mut r = Reader::new(bytes, "prefix certificate");
        let scheme = r.header()?;
        let len_s = r.u64()?;
        let len_t = r.u64()?;
        let count = r.u32()? as usize;
        let labels = r.labels(count, k)?;
        Ok(PrefixCertificate {
            scheme,
            len_s,
            len_t,
            labels,
        })
    }

    /// Size of the label payload in bytes.
    pub fn label_bytes(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }
}

impl CommitState {
    /// The state before the first item.
    pub fn empty(scheme: SchemeId) -> Self {
        CommitState {
            scheme,
            length: 0,
            pool: Vec::new(),
        }
    }

    /// `version || scheme || k (1) || length (8) || count (4) || labels`;
    /// vertices are implied by the scheme and length.
    pub fn encode(&self, k: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(15 + self.pool.len() * k);
        header(&mut out, self.scheme);
        out.push(k as u8);
        out.extend_from_slice(&self.length.to_be_bytes());
        out.extend_from_slice(&(self.pool.len() as u32).to_be_bytes());
        for (_, l) in &self.pool {
            out.extend_from_slice(l.as_bytes());
        }
        out
    }

    /// Decodes labels against the vertex list the scheme prescribes for
    /// the encoded length.
    pub fn decode<F>(bytes: &[u8], pool_vertices: F) -> Result<Self, PasError>
    where
        F: FnOnce(SchemeId, u64) -> Vec<VertexId>,
    {
        let mut r = Reader::new(bytes, "commit state");
        let scheme = r.header()?;
        let k = r.take(1)?[0] as usize;
        check_width(k)?;
        let length = r.u64()?;
        let count = r.u32()? as usize;
        let labels = r.labels(count, k)?;
        let vertices = if length == 0 {
            Vec::new()
        } else {
            pool_vertices(scheme, length)
        };
        if vertices.len() != labels.len() {
            return Err(PasError::CorruptState(format!(
                "pool of length {length} has {} vertices, state has {} labels",
                vertices.len(),
                labels.len()
            )));
        }
        Ok(CommitState {
            scheme,
            length,
            pool: vertices.into_iter().zip(labels).collect(),
        })
    }
}

impl PositionalCertificate {
    /// `version || scheme || n (8) || count (4) || labels`.
    pub fn encode(&self) -> Vec<u8> {
        let k = self.labels.values().next().map_or(0, |l| l.len());
        let mut out = Vec::with_capacity(14 + self.labels.len() * k);
        header(&mut out, self.scheme);
        out.extend_from_slice(&self.n.to_be_bytes());
        out.extend_from_slice(&(self.labels.len() as u32).to_be_bytes());
        for l in self.labels.values() {
            out.extend_from_slice(l.as_bytes());
        }
        out
    }

    pub fn decode<F>(bytes: &[u8], k: usize, vertices: F) -> Result<Self, PasError>
    where
        F: FnOnce(SchemeId, u64) -> Vec<VertexId>,
    {
        check_width(k)?;
        let mut r = Reader::new(bytes, "positional certificate");
        let scheme = r.header()?;
        let n = r.u64()?;
        if n == 0 {
            return Err(r.err("length 0"));
        }
        let count = r.u32()? as usize;
        let labels = r.labels(count, k)?;
        let vertices = vertices(scheme, n);
        if vertices.len() != count {
            return Err(r.err("label count does not match the pool"));
        }
        Ok(PositionalCertificate {
            scheme,
            n,
            labels: vertices.into_iter().zip(labels).collect(),
        })
    }
}

impl Identifier {
    pub fn encode(&self) -> Vec<u8> {
        let k = self.item_hash.len();
        let mut out = Vec::with_capacity(14 + k * (1 + self.boundary.len()));
        header(&mut out, self.scheme);
        out.extend_from_slice(&self.position.to_be_bytes());
        out.extend_from_slice(self.item_hash.as_bytes());
        out.extend_from_slice(&(self.boundary.len() as u32).to_be_bytes());
        for l in self.boundary.values() {
            out.extend_from_slice(l.as_bytes());
        }
        out
    }

    /// `vertices` yields the boundary vertices (without the item's sink)
    /// for a scheme and position.
    pub fn decode<F>(bytes: &[u8], k: usize, vertices: F) -> Result<Self, PasError>
    where
        F: FnOnce(SchemeId, u64) -> Vec<VertexId>,
    {
        check_width(k)?;
        let mut r = Reader::new(bytes, "identifier");
        let scheme = r.header()?;
        let position = r.u64()?;
        if position == 0 {
            return Err(r.err("position 0"));
        }
        let item_hash = r.label(k)?;
        let count = r.u32()? as usize;
        let labels = r.labels(count, k)?;
        let vertices = vertices(scheme, position);
        if vertices.len() != count {
            return Err(r.err("boundary count does not match the identifier paths"));
        }
        Ok(Identifier {
            scheme,
            position,
            item_hash,
            boundary: vertices.into_iter().zip(labels).collect(),
        })
    }

    /// Number of labels carried, the item hash included.
    pub fn label_count(&self) -> usize {
        1 + self.boundary.len()
    }
}

impl TimestampCertificate {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for part in [self.prefix.encode(), self.id_s.encode(), self.id_t.encode()] {
            out.extend_from_slice(&(part.len() as u32).to_be_bytes());
            out.extend_from_slice(&part);
        }
        out
    }

    /// Splits the three length-prefixed parts.
    pub fn split(bytes: &[u8]) -> Result<[&[u8]; 3], PasError> {
        let mut r = Reader::new(bytes, "timestamp certificate");
        let mut parts = [&bytes[..0]; 3];
        for p in &mut parts {
            let n = r.u32()? as usize;
            *p = r.take(n)?;
        }
        r.finish()?;
        Ok(parts)
    }
}
