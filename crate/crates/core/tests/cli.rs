use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use pfxd::cli::{run, sidecar_path, LogFile};
use pfxd::pas::{Digest, Pas};
use pfxd::schemes::SchemeId;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn pfxd(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["pfxd"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

/// Appends `items` through files, returning the printed digests.
fn build_log(dir: &TempDir, log: &str, scheme: &str, items: &[Vec<u8>]) -> Vec<String> {
    let item_file = path(dir, "item.bin");
    items
        .iter()
        .map(|item| {
            fs::write(&item_file, item).unwrap();
            let (code, out, err) = pfxd(&[
                "append", log, "--create", "--scheme", scheme, "--file", &item_file,
            ]);
            assert_eq!(code, 0, "{err}");
            out.trim().to_string()
        })
        .collect()
}

fn digest_of(log: &str, at: u64) -> String {
    let (code, out, err) = pfxd(&["digest", log, "--at", &at.to_string()]);
    assert_eq!(code, 0, "{err}");
    out.trim().to_string()
}

fn items(n: usize) -> Vec<Vec<u8>> {
    (0..n).map(|i| format!("record-{i}").into_bytes()).collect()
}

#[test]
fn fresh_linear_log_prints_a_digest() {
    let dir = TempDir::new().unwrap();
    let log = path(&dir, "log");
    let digests = build_log(&dir, &log, "linear", &items(1));
    let bytes = hex::decode(&digests[0]).unwrap();
    assert_eq!(bytes.len(), 1 + 1 + 8 + 32);
    let d = Digest::decode(&bytes).unwrap();
    assert_eq!((d.scheme, d.length), (SchemeId::Linear, 1));
}

#[test]
fn appended_digests_equal_batch_commits() {
    let dir = TempDir::new().unwrap();
    for scheme in SchemeId::ALL {
        let log = path(&dir, &format!("{scheme}.log"));
        let data = items(23);
        let printed = build_log(&dir, &log, scheme.name(), &data);
        let batch = Pas::new(scheme).commit_all(&data).unwrap();
        for (p, b) in printed.iter().zip(&batch) {
            assert_eq!(p, &hex::encode(b.encode()), "{scheme}");
        }
        assert_eq!(digest_of(&log, 23), printed[22]);
        assert_eq!(LogFile::read(Path::new(&log)).unwrap().items, data);
    }
}

#[test]
fn tampered_or_stale_sidecar_is_refused() {
    let dir = TempDir::new().unwrap();
    let log = path(&dir, "log");
    build_log(&dir, &log, "hypercore", &items(5));
    let side = sidecar_path(Path::new(&log));
    let good = fs::read(&side).unwrap();

    let mut bad = good.clone();
    let at = bad.len() - 40;
    bad[at] ^= 1;
    fs::write(&side, &bad).unwrap();
    let item = path(&dir, "x");
    fs::write(&item, b"x").unwrap();
    assert_eq!(pfxd(&["append", &log, "--file", &item]).0, 2);

    // A state for a different scheme under the same log.
    let other = path(&dir, "other");
    build_log(&dir, &other, "ct", &items(5));
    fs::copy(sidecar_path(Path::new(&other)), &side).unwrap();
    assert_eq!(pfxd(&["append", &log, "--file", &item]).0, 2);

    // Replaying the log repairs the state.
    assert_eq!(pfxd(&["rebuild", &log]).0, 0);
    assert_eq!(fs::read(&side).unwrap(), good);
    assert_eq!(pfxd(&["append", &log, "--file", &item]).0, 0);
    assert_eq!(
        pfxd(&["append", &log, "--scheme", "linear", "--file", &item]).0,
        2
    );
}

#[test]
fn prove_reproduces_the_linear_example() {
    let dir = TempDir::new().unwrap();
    let log = path(&dir, "log");
    let data = items(7);
    build_log(&dir, &log, "linear", &data);
    let cert = path(&dir, "c");
    let (code, out, _) = pfxd(&["prove", &log, "--prefix", "3", "--at", "7", "-o", &cert]);
    assert_eq!(code, 0);
    let bytes = fs::read(&cert).unwrap();
    let expected = Pas::new(SchemeId::Linear).certify(&data, 3).unwrap();
    assert_eq!(bytes, expected.encode());
    // Sinks 3..=7 and the chain vertex of length 2.
    assert_eq!(expected.labels.len(), 6);
    assert!(out.contains(&digest_of(&log, 3)) && out.contains(&digest_of(&log, 7)));
    assert_eq!(
        pfxd(&[
            "verify",
            "--digest-s",
            &digest_of(&log, 3),
            "--digest-t",
            &digest_of(&log, 7),
            "--cert",
            &cert,
        ])
        .0,
        0
    );
}

#[test]
fn prove_rejects_bad_ranges() {
    let dir = TempDir::new().unwrap();
    let log = path(&dir, "log");
    build_log(&dir, &log, "tat", &items(7));
    let cert = path(&dir, "c");
    for args in [
        vec!["--prefix", "7", "--at", "7"],
        vec!["--prefix", "0", "--at", "7"],
        vec!["--prefix", "3", "--at", "8"],
        vec!["--stamp", "5", "5"],
        vec!["--stamp", "2", "9"],
    ] {
        let mut argv = vec!["prove", log.as_str(), "-o", cert.as_str()];
        argv.extend(args.iter().copied());
        let (code, _, err) = pfxd(&argv);
        assert_eq!(code, 2, "{args:?}");
        assert!(
            err.contains("--") || err.contains('I') || err.contains('J'),
            "{err}"
        );
    }
}

#[test]
fn stamp_round_trip_and_tamper_loop() {
    let dir = TempDir::new().unwrap();
    let log = path(&dir, "log");
    build_log(&dir, &log, "ct", &items(7));
    let cert = path(&dir, "s");
    assert_eq!(
        pfxd(&["prove", &log, "--stamp", "4", "7", "-o", &cert]).0,
        0
    );
    let (ds, dt) = (digest_of(&log, 4), digest_of(&log, 7));
    let verify = |file: &str| {
        pfxd(&[
            "verify",
            "--digest-s",
            &ds,
            "--digest-t",
            &dt,
            "--cert",
            file,
            "--stamp",
        ])
        .0
    };
    assert_eq!(verify(&cert), 0);
    let bytes = fs::read(&cert).unwrap();
    let bad = path(&dir, "bad");
    for i in 0..bytes.len() {
        let mut b = bytes.clone();
        b[i] ^= 0x10;
        fs::write(&bad, &b).unwrap();
        let code = verify(&bad);
        assert!(code == 1 || code == 2, "octet {i}: exit {code}");
    }
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let log = path(&dir, "log");
    build_log(&dir, &log, "skiplist", &items(9));
    let cert = path(&dir, "c");
    assert_eq!(pfxd(&["prove", &log, "--prefix", "4", "-o", &cert]).0, 0);
    let (ds, dt) = (digest_of(&log, 4), digest_of(&log, 9));
    let v = |s: &str, t: &str, c: &str| {
        pfxd(&["verify", "--digest-s", s, "--digest-t", t, "--cert", c]).0
    };
    assert_eq!(v(&ds, &dt, &cert), 0);

    // One label octet altered refutes.
    let mut bytes = fs::read(&cert).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x01;
    let bad = path(&dir, "bad");
    fs::write(&bad, &bytes).unwrap();
    assert_eq!(v(&ds, &dt, &bad), 1);

    // Digests of another scheme: context mismatch.
    let other = path(&dir, "other");
    build_log(&dir, &other, "linear", &items(9));
    assert_eq!(v(&digest_of(&other, 4), &digest_of(&other, 9), &cert), 2);
    assert_eq!(v(&ds, &digest_of(&other, 9), &cert), 2);
    // Swapped lengths, garbage hex, missing file.
    assert_eq!(v(&dt, &ds, &cert), 2);
    assert_eq!(v("zz", &dt, &cert), 2);
    assert_eq!(v(&ds, &dt, &path(&dir, "missing")), 3);
}

#[test]
fn fuzzed_certificates_never_verify_or_crash() {
    let dir = TempDir::new().unwrap();
    let log = path(&dir, "log");
    build_log(&dir, &log, "antimonotone-optimal", &items(12));
    let (ds, dt) = (digest_of(&log, 5), digest_of(&log, 12));
    let file = path(&dir, "fuzz");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..300 {
        let len = rng.gen_range(0..400);
        let mut b: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        if round % 2 == 0 && b.len() >= 2 {
            b[0] = 1;
            b[1] = SchemeId::AntimonotoneOptimal.wire();
        }
        fs::write(&file, &b).unwrap();
        for stamp in [false, true] {
            let mut argv = vec![
                "verify",
                "--digest-s",
                &ds,
                "--digest-t",
                &dt,
                "--cert",
                &file,
            ];
            if stamp {
                argv.push("--stamp");
            }
            let code = pfxd(&argv).0;
            assert!(code == 1 || code == 2, "round {round}: exit {code}");
        }
    }
}

#[test]
fn bench_and_dot_outputs() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "b.csv");
    let (code, table, _) = pfxd(&[
        "bench",
        "--schemes",
        "linear,tat,ct",
        "--n-max",
        "100",
        "--csv",
        &csv,
    ]);
    assert_eq!(code, 0);
    assert!(table.contains("tat"));
    let rows = fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(rows, 1 + 3 * 8);
    assert_eq!(pfxd(&["bench", "--n-max", "100000", "--csv", &csv]).0, 2);

    let (code, dot, _) = pfxd(&["export-dot", "--scheme", "linear", "--n", "3"]);
    assert_eq!(code, 0);
    let vertices = dot
        .lines()
        .filter(|l| !l.contains("->") && l.trim_start().starts_with('"'))
        .count();
    assert_eq!(vertices, 6);

    // The truncation keeps earlier lengths' internal vertices; exactly one
    // belongs to length 6.
    let (_, dot, _) = pfxd(&["export-dot", "--scheme", "ct", "--n", "6"]);
    let internal: Vec<&str> = dot
        .lines()
        .filter(|l| !l.contains("->") && l.trim_start().starts_with("\"c"))
        .collect();
    assert_eq!(
        internal.iter().filter(|l| l.contains("\"c6.")).count(),
        1,
        "{dot}"
    );
    assert_eq!(pfxd(&["export-dot", "--scheme", "ct", "--n", "5000"]).0, 2);
}

#[test]
fn binary_reads_items_from_stdin() {
    let dir = TempDir::new().unwrap();
    let log = dir.path().join("log");
    let exe = env!("CARGO_BIN_EXE_pfxd");
    let mut printed = Vec::new();
    for item in [b"alpha".as_slice(), b"", b"gamma"] {
        let mut child = Command::new(exe)
            .args([
                "append",
                log.to_str().unwrap(),
                "--create",
                "--scheme",
                "hypercore",
            ])
            .env("PFXD_HASH", "sha512")
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(item).unwrap();
        let out = child.wait_with_output().unwrap();
        assert!(out.status.success());
        printed.push(String::from_utf8(out.stdout).unwrap().trim().to_string());
    }
    let header = LogFile::read(&log).unwrap().header;
    assert_eq!(header.algorithm.name(), "sha512");
    assert_eq!(hex::decode(&printed[2]).unwrap().len(), 10 + 64);
    let status = Command::new(exe).args(["verify"]).output().unwrap().status;
    assert_eq!(status.code(), Some(2));
}
