//! Hash primitive, fixed-width labels, and an optional invocation counter.
//!
//! Sink labels are `H(sink_tag || payload)`; inner labels are
//! `H(inner_tag || l_1 || ... || l_m)` over the out-neighbor labels in
//! canonical vertex order. The two tags must differ so that no sink payload
//! can be read as a concatenation of child labels.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use sha2::digest::DynDigest;
use sha2::{Sha256, Sha384, Sha512, Sha512_256};
use thiserror::Error;

/// Largest supported label width in octets.
pub const MAX_LABEL_LEN: usize = 64;
/// Smallest admissible label width in octets.
pub const MIN_LABEL_LEN: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HashError {
    #[error("unknown hash algorithm id {0:#04x}")]
    UnknownAlgorithm(u8),
    #[error("label width {0} out of range {MIN_LABEL_LEN}..={MAX_LABEL_LEN}")]
    BadWidth(usize),
    #[error("sink and inner domain tags must differ")]
    SameDomainTags,
    #[error("label has {got} octets, expected {expected}")]
    WidthMismatch { expected: usize, got: usize },
}

/// A fixed-width hash output. Comparison is bytewise over the used prefix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    len: u8,
    buf: [u8; MAX_LABEL_LEN],
}

impl Label {
    pub fn from_slice(bytes: &[u8]) -> Result<Self, HashError> {
        if bytes.len() < MIN_LABEL_LEN || bytes.len() > MAX_LABEL_LEN {
            return Err(HashError::BadWidth(bytes.len()));
        }
        let mut buf = [0u8; MAX_LABEL_LEN];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(Label {
            len: bytes.len() as u8,
            buf,
        })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buf[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns a copy with one octet xor-ed by `mask`.
    pub fn with_flipped_octet(&self, index: usize, mask: u8) -> Label {
        let mut out = *self;
        out.buf[index] ^= mask;
        out
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.as_bytes())
    }
}

impl AsRef<[u8]> for Label {
    fn as_ref(&self) -> &[u8] {
        self.as_bytes()
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.to_hex();
        write!(f, "Label({}…)", &hex[..hex.len().min(12)])
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum HashAlgorithm {
    Sha256 = 0x01,
    Sha384 = 0x02,
    Sha512 = 0x03,
    Sha512_256 = 0x04,
}

impl HashAlgorithm {
    pub fn from_id(id: u8) -> Result<Self, HashError> {
        match id {
            0x01 => Ok(Self::Sha256),
            0x02 => Ok(Self::Sha384),
            0x03 => Ok(Self::Sha512),
            0x04 => Ok(Self::Sha512_256),
            other => Err(HashError::UnknownAlgorithm(other)),
        }
    }

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn output_len(self) -> usize {
        match self {
            Self::Sha256 | Self::Sha512_256 => 32,
            Self::Sha384 => 48,
            Self::Sha512 => 64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sha256 => "sha256",
            Self::Sha384 => "sha384",
            Self::Sha512 => "sha512",
            Self::Sha512_256 => "sha512-256",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Self::Sha256, Self::Sha384, Self::Sha512, Self::Sha512_256]
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(name))
    }

    fn new_digest(self) -> Box<dyn DynDigest> {
        match self {
            Self::Sha256 => Box::new(Sha256::default()),
            Self::Sha384 => Box::new(Sha384::default()),
            Self::Sha512 => Box::new(Sha512::default()),
            Self::Sha512_256 => Box::new(Sha512_256::default()),
        }
    }
}

/// Algorithm choice, output width `k`, and the two domain-separation tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HashConfig {
    algorithm: HashAlgorithm,
    k: usize,
    sink_tag: u8,
    inner_tag: u8,
}

impl HashConfig {
    pub fn new(algorithm: HashAlgorithm, sink_tag: u8, inner_tag: u8) -> Result<Self, HashError> {
        if sink_tag == inner_tag {
            return Err(HashError::SameDomainTags);
        }
        Ok(HashConfig {
            algorithm,
            k: algorithm.output_len(),
            sink_tag,
            inner_tag,
        })
    }

    /// Same algorithm with the output truncated to `k` octets.
    pub fn truncated(self, k: usize) -> Result<Self, HashError> {
        if k < MIN_LABEL_LEN || k > self.algorithm.output_len() {
            return Err(HashError::BadWidth(k));
        }
        Ok(HashConfig { k, ..self })
    }

    pub fn with_algorithm(algorithm: HashAlgorithm) -> Self {
        HashConfig::new(algorithm, 0x00, 0x01).expect("default tags differ")
    }

    pub fn algorithm(&self) -> HashAlgorithm {
        self.algorithm
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sink_tag(&self) -> u8 {
        self.sink_tag
    }

    pub fn inner_tag(&self) -> u8 {
        self.inner_tag
    }
}

impl Default for HashConfig {
    fn default() -> Self {
        HashConfig::with_algorithm(HashAlgorithm::Sha256)
    }
}

/// The hash function used for labeling. Cloning shares the invocation
/// counter, so a clone handed to a sub-computation reports into the same
/// total.
#[derive(Clone)]
pub struct Hasher {
    config: HashConfig,
    invocations: Option<Arc<AtomicU64>>,
}

impl fmt::Debug for Hasher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hasher")
            .field("config", &self.config)
            .field("counting", &self.invocations.is_some())
            .finish()
    }
}

impl Default for Hasher {
    fn default() -> Self {
        Hasher::new(HashConfig::default())
    }
}

impl Hasher {
    pub fn new(config: HashConfig) -> Self {
        Hasher {
            config,
            invocations: None,
        }
    }

    /// A hasher that counts every call to the underlying primitive.
    pub fn counting(config: HashConfig) -> Self {
        Hasher {
            config,
            invocations: Some(Arc::new(AtomicU64::new(0))),
        }
    }

    pub fn config(&self) -> &HashConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    /// Number of hash invocations so far; always 0 for a non-counting hasher.
    pub fn invocations(&self) -> u64 {
        self.invocations
            .as_ref()
            .map_or(0, |c| c.load(Ordering::Relaxed))
    }

    pub fn reset_invocations(&self) {
        if let Some(c) = &self.invocations {
            c.store(0, Ordering::Relaxed);
        }
    }

    fn finish(&self, parts: &[&[u8]]) -> Label {
        if let Some(c) = &self.invocations {
            c.fetch_add(1, Ordering::Relaxed);
        }
        let mut d = self.config.algorithm.new_digest();
        for p in parts {
            d.update(p);
        }
        let out = d.finalize();
        Label::from_slice(&out[..self.config.k]).expect("configured width is valid")
    }

    pub fn sink_label(&self, payload: &[u8]) -> Label {
        self.finish(&[&[self.config.sink_tag], payload])
    }

    /// Hash of the concatenated child labels, which the caller supplies in
    /// canonical vertex order.
    pub fn inner_label<'a, I>(&self, children: I) -> Label
    where
        I: IntoIterator<Item = &'a Label>,
    {
        if let Some(c) = &self.invocations {
            c.fetch_add(1, Ordering::Relaxed);
        }
        let mut d = self.config.algorithm.new_digest();
        d.update(&[self.config.inner_tag]);
        for l in children {
            d.update(l.as_bytes());
        }
        let out = d.finalize();
        Label::from_slice(&out[..self.config.k]).expect("configured width is valid")
    }
}
