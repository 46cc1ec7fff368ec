//! Command-line surface: build logs, issue and check certificates,
//! measure schemes, export graphs.
//!
//! Exit codes: 0 success or verified, 1 refuted, 2 invalid input or
//! context mismatch, 3 I/O failure.

mod log;

use std::fs::{self, OpenOptions};
use std::io::{self, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};
use fs2::FileExt;
use thiserror::Error;

use crate::bench::{measure, table_report, MEASURE_MAX_N};
use crate::hash::{HashAlgorithm, HashConfig, Hasher};
use crate::pas::{Digest, Identifier, Pas, PasError, PrefixCertificate, TimestampCertificate};
use crate::schemes::{to_dot, SchemeId};

pub use log::{
    decode_sidecar, encode_sidecar, sidecar_path, LogFile, LogHeader, LOG_VERSION, MAGIC,
};

/// Environment variable naming the hash algorithm of newly created logs.
pub const HASH_ENV: &str = "PFXD_HASH";
/// Largest length `export-dot` renders.
pub const DOT_MAX_N: u64 = 1024;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("refuted: {0}")]
    Refuted(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Pas(#[from] PasError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Refuted(_) => 1,
            CliError::Invalid(_) | CliError::Pas(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "pfxd",
    version,
    about = "Prefix-authenticated append-only logs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Append one item to a log and print the new digest.
    Append(AppendArgs),
    /// Print the digest of the log or of one of its prefixes.
    Digest(DigestArgs),
    /// Recompute the sidecar state by replaying the log.
    Rebuild(RebuildArgs),
    /// Write a prefix or timestamp certificate.
    Prove(ProveArgs),
    /// Check a certificate against two digests.
    Verify(VerifyArgs),
    /// Measure certificate, pool and graph sizes.
    Bench(BenchArgs),
    /// Render the graph of a scheme in DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Debug, Args)]
pub struct AppendArgs {
    pub log: PathBuf,
    /// Read the item from this file instead of standard input.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Create the log if it does not exist.
    #[arg(long)]
    pub create: bool,
    /// Scheme of a new log; checked against the header of an existing one.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Label width in octets of a new log; defaults to the full hash output.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DigestArgs {
    pub log: PathBuf,
    /// Prefix length; defaults to the whole log.
    #[arg(long)]
    pub at: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RebuildArgs {
    pub log: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["prefix", "stamp"])))]
pub struct ProveArgs {
    pub log: PathBuf,
    /// Length of the prefix to certify.
    #[arg(long)]
    pub prefix: Option<u64>,
    /// Length of the longer sequence; defaults to the item count.
    #[arg(long, requires = "prefix")]
    pub at: Option<u64>,
    /// Certify that item I precedes item J.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub stamp: Option<Vec<u64>>,
    /// Certificate output file.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub digest_s: String,
    #[arg(long)]
    pub digest_t: String,
    #[arg(long)]
    pub cert: PathBuf,
    /// The certificate is a timestamp certificate.
    #[arg(long)]
    pub stamp: bool,
    /// Hash algorithm the digests were made with.
    #[arg(long, default_value = "sha256")]
    pub hash: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated scheme names, or `all`.
    #[arg(long, default_value = "all")]
    pub schemes: String,
    /// Largest length; the grid is every power of two below it plus itself.
    #[arg(long)]
    pub n_max: u64,
    #[arg(long)]
    pub csv: PathBuf,
    /// Also write the text table here; it goes to standard output otherwise.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportDotArgs {
    #[arg(long)]
    pub scheme: String,
    #[arg(long)]
    pub n: u64,
    /// Output file; standard output otherwise.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code. Messages go to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "pfxd: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Append(a) => cmd_append(&a, out),
        Command::Digest(a) => cmd_digest(&a, out),
        Command::Rebuild(a) => cmd_rebuild(&a, out),
        Command::Prove(a) => cmd_prove(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::ExportDot(a) => cmd_export_dot(&a, out),
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn parse_scheme(name: &str) -> Result<SchemeId> {
    SchemeId::from_str(name).map_err(|e| CliError::Invalid(e.to_string()))
}

fn parse_algorithm(name: &str) -> Result<HashAlgorithm> {
    HashAlgorithm::from_name(name)
        .or_else(|| {
            name.parse::<u8>()
                .ok()
                .and_then(|id| HashAlgorithm::from_id(id).ok())
        })
        .ok_or_else(|| CliError::Invalid(format!("unknown hash algorithm {name:?}")))
}

/// Algorithm for a new log: the environment override, else SHA-256.
fn default_algorithm() -> Result<HashAlgorithm> {
    match std::env::var(HASH_ENV) {
        Ok(name) if !name.is_empty() => parse_algorithm(&name),
        _ => Ok(HashAlgorithm::Sha256),
    }
}

fn create_log(a: &AppendArgs) -> Result<LogHeader> {
    let scheme = parse_scheme(
        a.scheme
            .as_deref()
            .ok_or_else(|| CliError::Invalid("--create needs --scheme".into()))?,
    )?;
    let algorithm = default_algorithm()?;
    let k = a.k.unwrap_or(algorithm.output_len());
    let header = LogHeader {
        scheme,
        algorithm,
        k,
    };
    header
        .hash_config()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut f = OpenOptions::new()
        .write(true)
        .create_new(true)
        .open(&a.log)
        .map_err(|e| CliError::io(&a.log, e))?;
    f.write_all(&header.encode())
        .and_then(|_| f.sync_all())
        .map_err(|e| CliError::io(&a.log, e))?;
    let side = sidecar_path(&a.log);
    let pas = header.pas();
    fs::write(&side, encode_sidecar(&pas.empty_state(), k)).map_err(|e| CliError::io(&side, e))?;
    Ok(header)
}

fn cmd_append(a: &AppendArgs, out: &mut dyn Write) -> Result<()> {
    if a.create && !a.log.exists() {
        create_log(a)?;
    }
    let log = LogFile::read(&a.log)?;
    let header = log.header;
    if let Some(name) = &a.scheme {
        let wanted = parse_scheme(name)?;
        if wanted != header.scheme {
            return Err(CliError::Invalid(format!(
                "log uses {}, not {wanted}",
                header.scheme
            )));
        }
    }
    if a.k.is_some_and(|k| k != header.k) {
        return Err(CliError::Invalid(format!("log uses k = {}", header.k)));
    }
    let item = log::read_input(a.file.as_deref())?;
    if item.len() > u32::MAX as usize {
        return Err(CliError::Invalid("item longer than 2^32 - 1 octets".into()));
    }

    let side = sidecar_path(&a.log);
    let mut sf = OpenOptions::new()
        .read(true)
        .write(true)
        .open(&side)
        .map_err(|e| CliError::io(&side, e))?;
    sf.lock_exclusive().map_err(|e| CliError::io(&side, e))?;
    let mut bytes = Vec::new();
    sf.read_to_end(&mut bytes)
        .map_err(|e| CliError::io(&side, e))?;
    let state = decode_sidecar(&bytes, &header)?;
    // Reread under the lock so a concurrent append cannot slip in between.
    let log = LogFile::read(&a.log)?;
    if state.length != log.items.len() as u64 {
        return Err(CliError::Invalid(format!(
            "sidecar covers {} items but the log holds {}; run `pfxd rebuild`",
            state.length,
            log.items.len()
        )));
    }
    let pas = header.pas();
    let (digest, next) = pas.sparse_commit(&state, &item)?;
    log::append_record(&a.log, &item)?;
    let encoded = encode_sidecar(&next, header.k);
    sf.seek(SeekFrom::Start(0))
        .and_then(|_| sf.set_len(0))
        .and_then(|_| sf.write_all(&encoded))
        .and_then(|_| sf.sync_all())
        .map_err(|e| CliError::io(&side, e))?;
    let _ = FileExt::unlock(&sf);
    say(out, &hex::encode(digest.encode()))
}

fn cmd_digest(a: &DigestArgs, out: &mut dyn Write) -> Result<()> {
    let log = LogFile::read(&a.log)?;
    let count = log.items.len() as u64;
    let n = a.at.unwrap_or(count);
    if n == 0 || n > count {
        return Err(CliError::Invalid(format!(
            "length {n} outside 1..={count} (the item count)"
        )));
    }
    let d = log.header.pas().commit(&log.items[..n as usize])?;
    say(out, &hex::encode(d.encode()))
}

fn cmd_rebuild(a: &RebuildArgs, out: &mut dyn Write) -> Result<()> {
    let log = LogFile::read(&a.log)?;
    let pas = log.header.pas();
    let state = if log.items.is_empty() {
        pas.empty_state()
    } else {
        pas.prover(&log.items).state(log.items.len() as u64)?
    };
    log::write_atomic(&sidecar_path(&a.log), &encode_sidecar(&state, log.header.k))?;
    say(out, &format!("rebuilt state for {} items", log.items.len()))
}

fn cmd_prove(a: &ProveArgs, out: &mut dyn Write) -> Result<()> {
    let log = LogFile::read(&a.log)?;
    let count = log.items.len() as u64;
    let pas = log.header.pas();
    let (bytes, len_s, len_t) = if let Some(ls) = a.prefix {
        let lt = a.at.unwrap_or(count);
        check_pair(ls, lt, count, "--prefix", "--at")?;
        let cert = pas.certify(&log.items[..lt as usize], ls)?;
        (cert.encode(), ls, lt)
    } else {
        let stamp = a
            .stamp
            .as_deref()
            .expect("clap requires --prefix or --stamp");
        let (i, j) = (stamp[0], stamp[1]);
        check_pair(i, j, count, "I", "J")?;
        let t = &log.items[..j as usize];
        let tc = pas.timestamp_certify(&t[..i as usize], t)?;
        (tc.encode(), i, j)
    };
    fs::write(&a.out, &bytes).map_err(|e| CliError::io(&a.out, e))?;
    let mut prover = pas.prover(&log.items[..len_t as usize]);
    say(
        out,
        &format!("digest-s {}", hex::encode(prover.digest(len_s)?.encode())),
    )?;
    say(
        out,
        &format!("digest-t {}", hex::encode(prover.digest(len_t)?.encode())),
    )
}

fn check_pair(ls: u64, lt: u64, count: u64, s_flag: &str, t_flag: &str) -> Result<()> {
    if ls < 1 {
        return Err(CliError::Invalid(format!("{s_flag} must be at least 1")));
    }
    if lt > count {
        return Err(CliError::Invalid(format!(
            "{t_flag} {lt} exceeds the item count {count}"
        )));
    }
    if ls >= lt {
        return Err(CliError::Invalid(format!(
            "{s_flag} {ls} must be smaller than {t_flag} {lt}"
        )));
    }
    Ok(())
}

fn parse_digest(hex_str: &str, flag: &str) -> Result<Digest> {
    let bytes = hex::decode(hex_str.trim())
        .map_err(|e| CliError::Invalid(format!("{flag}: not hexadecimal: {e}")))?;
    Digest::decode(&bytes).map_err(|e| CliError::Invalid(format!("{flag}: {e}")))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let d_s = parse_digest(&a.digest_s, "--digest-s")?;
    let d_t = parse_digest(&a.digest_t, "--digest-t")?;
    if d_s.scheme != d_t.scheme {
        return Err(CliError::Invalid(format!(
            "context mismatch: digests use {} and {}",
            d_s.scheme, d_t.scheme
        )));
    }
    let k = d_s.label.len();
    if d_t.label.len() != k {
        return Err(CliError::Invalid(
            "context mismatch: digest widths differ".into(),
        ));
    }
    let config = HashConfig::with_algorithm(parse_algorithm(&a.hash)?)
        .truncated(k)
        .map_err(|e| CliError::Invalid(format!("digest width: {e}")))?;
    let pas = Pas::with_hasher(d_s.scheme, Hasher::new(config));
    let bytes = fs::read(&a.cert).map_err(|e| CliError::io(&a.cert, e))?;
    let ok = if a.stamp {
        let [p, s, t] = TimestampCertificate::split(&bytes)?;
        let ident = |b: &[u8]| {
            Identifier::decode(b, k, |_, pos| {
                pas.identifier_vertices(pos).into_iter().collect()
            })
        };
        let tc = TimestampCertificate {
            prefix: PrefixCertificate::decode(p, k)?,
            id_s: ident(s)?,
            id_t: ident(t)?,
        };
        pas.timestamp_verify(&d_s, &d_t, &tc)?
    } else {
        let cert = PrefixCertificate::decode(&bytes, k)?;
        pas.verify(&d_s, &d_t, &cert)?
    };
    if ok {
        say(out, "verified")
    } else {
        Err(CliError::Refuted(
            "certificate does not link the digests".into(),
        ))
    }
}

/// Powers of two below `n_max`, then `n_max`.
pub fn bench_grid(n_max: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = (0..64)
        .map(|j| 1u64 << j)
        .take_while(|&n| n < n_max)
        .collect();
    grid.push(n_max);
    grid
}

fn parse_scheme_list(list: &str) -> Result<Vec<SchemeId>> {
    if list.eq_ignore_ascii_case("all") {
        return Ok(SchemeId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let id = parse_scheme(name)?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        return Err(CliError::Invalid("--schemes names no scheme".into()));
    }
    Ok(out)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    if a.n_max == 0 || a.n_max > MEASURE_MAX_N {
        return Err(CliError::Invalid(format!(
            "--n-max must lie in 1..={MEASURE_MAX_N}"
        )));
    }
    let schemes = parse_scheme_list(&a.schemes)?;
    let grid = bench_grid(a.n_max);
    let per_scheme: Vec<_> = std::thread::scope(|s| {
        let jobs: Vec<_> = schemes
            .iter()
            .map(|&id| {
                let grid = &grid;
                s.spawn(move || measure(id, grid))
            })
            .collect();
        jobs.into_iter()
            .map(|j| j.join().expect("measurement thread panicked"))
            .collect()
    });
    let rows: Vec<_> = per_scheme.into_iter().flatten().collect();
    let report = table_report(&rows);
    fs::write(&a.csv, &report.csv).map_err(|e| CliError::io(&a.csv, e))?;
    match &a.table {
        Some(p) => fs::write(p, &report.table).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(report.table.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn cmd_export_dot(a: &ExportDotArgs, out: &mut dyn Write) -> Result<()> {
    let id = parse_scheme(&a.scheme)?;
    if a.n == 0 || a.n > DOT_MAX_N {
        return Err(CliError::Invalid(format!(
            "--n must lie in 1..={DOT_MAX_N}"
        )));
    }
    let dot = to_dot(id.graph().as_ref(), a.n);
    match &a.out {
        Some(p) => fs::write(p, dot).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(dot.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}
