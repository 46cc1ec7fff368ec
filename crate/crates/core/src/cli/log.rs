//! On-disk item log and its sidecar commit state.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest as _, Sha256};

use crate::hash::{HashAlgorithm, HashConfig, Hasher};
use crate::pas::{CommitState, Pas};
use crate::schemes::SchemeId;

use super::CliError;

pub const MAGIC: &[u8; 4] = b"PFXD";
pub const LOG_VERSION: u8 = 0x01;
const HEADER_LEN: usize = 8;
const CHECKSUM_LEN: usize = 32;

/// Parameters fixed when a log is created.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogHeader {
    pub scheme: SchemeId,
    pub algorithm: HashAlgorithm,
    pub k: usize,
}

impl LogHeader {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(MAGIC);
        out[4] = LOG_VERSION;
        out[5] = self.scheme.wire();
        out[6] = self.algorithm.id();
        out[7] = self.k as u8;
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CliError> {
        let bad = |m: String| CliError::Invalid(format!("log header: {m}"));
        if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
            return Err(bad("missing PFXD magic".into()));
        }
        if bytes[4] != LOG_VERSION {
            return Err(bad(format!("unsupported version {:#04x}", bytes[4])));
        }
        let scheme = SchemeId::from_wire(bytes[5]).map_err(|e| bad(e.to_string()))?;
        let algorithm = HashAlgorithm::from_id(bytes[6]).map_err(|e| bad(e.to_string()))?;
        let header = LogHeader {
            scheme,
            algorithm,
            k: bytes[7] as usize,
        };
        header.hash_config().map_err(|e| bad(e.to_string()))?;
        Ok(header)
    }

    pub fn hash_config(&self) -> Result<HashConfig, crate::hash::HashError> {
        HashConfig::with_algorithm(self.algorithm).truncated(self.k)
    }

    pub fn pas(&self) -> Pas {
        let config = self.hash_config().expect("validated on construction");
        Pas::with_hasher(self.scheme, Hasher::new(config))
    }
}

/// A log file: header followed by length-prefixed items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogFile {
    pub header: LogHeader,
    pub items: Vec<Vec<u8>>,
}

impl LogFile {
    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        let header = LogHeader::decode(bytes)?;
        let mut items = Vec::new();
        let mut rest = &bytes[HEADER_LEN..];
        while !rest.is_empty() {
            if rest.len() < 4 {
                return Err(CliError::Invalid("log: truncated record length".into()));
            }
            let n = u32::from_be_bytes(rest[..4].try_into().unwrap()) as usize;
            rest = &rest[4..];
            if rest.len() < n {
                return Err(CliError::Invalid(format!(
                    "log: record {} truncated",
                    items.len() + 1
                )));
            }
            items.push(rest[..n].to_vec());
            rest = &rest[n..];
        }
        Ok(LogFile { header, items })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        LogFile::parse(&bytes)
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = self.header.encode().to_vec();
        for item in &self.items {
            out.extend_from_slice(&record(item));
        }
        out
    }
}

fn record(item: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + item.len());
    out.extend_from_slice(&(item.len() as u32).to_be_bytes());
    out.extend_from_slice(item);
    out
}

/// Path of the sidecar state file of a log.
pub fn sidecar_path(log: &Path) -> PathBuf {
    let mut name = log.as_os_str().to_os_string();
    name.push(".state");
    PathBuf::from(name)
}

/// Sidecar bytes: the encoded commit state followed by its SHA-256, so
/// that a damaged state is refused instead of producing wrong digests.
pub fn encode_sidecar(state: &CommitState, k: usize) -> Vec<u8> {
    let mut out = state.encode(k);
    let sum = Sha256::digest(&out);
    out.extend_from_slice(&sum);
    out
}

pub fn decode_sidecar(bytes: &[u8], header: &LogHeader) -> Result<CommitState, CliError> {
    let bad = |m: String| CliError::Invalid(format!("sidecar state: {m}"));
    if bytes.len() < CHECKSUM_LEN {
        return Err(bad("truncated".into()));
    }
    let (body, sum) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    if Sha256::digest(body).as_slice() != sum {
        return Err(bad("checksum mismatch".into()));
    }
    let state = CommitState::decode(body, |id, n| id.graph().digest_pool(n))
        .map_err(|e| bad(e.to_string()))?;
    if state.scheme != header.scheme {
        return Err(bad(format!(
            "scheme {} differs from the log's {}",
            state.scheme, header.scheme
        )));
    }
    if state.pool.iter().any(|(_, l)| l.len() != header.k) {
        return Err(bad(format!(
            "label width differs from the log's {}",
            header.k
        )));
    }
    Ok(state)
}

/// Writes `bytes` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_os_string();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes)
        .and_then(|_| f.sync_all())
        .map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// Appends one record to an existing log.
pub fn append_record(path: &Path, item: &[u8]) -> Result<(), CliError> {
    let mut f = OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    f.write_all(&record(item))
        .and_then(|_| f.sync_all())
        .map_err(|e| CliError::io(path, e))
}

pub fn read_input(file: Option<&Path>) -> Result<Vec<u8>, CliError> {
    match file {
        Some(p) => fs::read(p).map_err(|e| CliError::io(p, e)),
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| CliError::io(Path::new("<stdin>"), e))?;
            Ok(buf)
        }
    }
}
