//! End-to-end checks of the `turanlab` binary: output shapes, exit codes,
//! file-format round-trips, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_turanlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_k4_minus(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("k4m.txt");
    std::fs::write(&path, "n 4\ne 0 1 2\ne 1 2 3\ne 0 1 3\n").unwrap();
    path
}

#[test]
fn gen_en_count_only() {
    let out = run(&["gen", "en", "--n", "9", "--count-only"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "30\n");
}

#[test]
fn orient_prints_bottle_for_k4_minus() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_k4_minus(dir.path());
    let out = run(&["orient", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "BOTTLE\n0 1 2 3 1 0\n");
}

#[test]
fn orient_roundtrips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    // E_9 is orientable; feed the generated file back through the verifier.
    let en = stdout(&run(&["gen", "en", "--n", "9"]));
    let hpath = dir.path().join("e9.txt");
    std::fs::write(&hpath, &en).unwrap();
    let out = run(&["orient", hpath.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ORIENTABLE"));
    let tournament: String = lines.map(|l| format!("{l}\n")).collect();
    let tpath = dir.path().join("e9_witness.txt");
    std::fs::write(&tpath, &tournament).unwrap();
    let verify = run(&[
        "verify",
        "orientation",
        hpath.to_str().unwrap(),
        tpath.to_str().unwrap(),
    ]);
    assert!(verify.status.success());
    assert_eq!(stdout(&verify), "OK\n");
}

#[test]
fn verify_bottle_ok_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_k4_minus(dir.path());
    let ok = run(&[
        "verify",
        "bottle",
        path.to_str().unwrap(),
        "0",
        "1",
        "2",
        "3",
        "1",
        "0",
    ]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok), "OK\n");

    let fail = run(&[
        "verify",
        "bottle",
        path.to_str().unwrap(),
        "0",
        "1",
        "2",
        "1",
        "0",
    ]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(stdout(&fail), "FAIL\n");
}

#[test]
fn check_free_reports_witness_and_freeness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_k4_minus(dir.path());
    let out = run(&["check-free", "--max-cycle", "4", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("l=4: "), "got {text}");

    let en = stdout(&run(&["gen", "en", "--n", "12"]));
    let epath = dir.path().join("e12.txt");
    std::fs::write(&epath, &en).unwrap();
    let out = run(&["check-free", "--max-cycle", "11", epath.to_str().unwrap()]);
    assert_eq!(stdout(&out), "FREE\n");
}

#[test]
fn clean_empties_k4_minus() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_k4_minus(dir.path());
    let out = run(&["clean", "--threshold", "2", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n 4\n");
}

#[test]
fn turan_k4_minus() {
    let out = run(&["turan", "--n", "4", "--family", "k4-minus"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("max_edges: 2"));

    let records = run(&[
        "--format", "records", "turan", "--n", "4", "--family", "k4-minus",
    ]);
    assert!(stdout(&records).contains("max_edges=2"));

    let missing_l = run(&["turan", "--n", "4", "--family", "fcm"]);
    assert_eq!(missing_l.status.code(), Some(2));
}

#[test]
fn stability_on_planted_partition() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("n 6\n");
    for a in 0..2 {
        for b in 2..4 {
            for c in 4..6 {
                text.push_str(&format!("e {a} {b} {c}\n"));
            }
        }
    }
    let path = dir.path().join("crossing.txt");
    std::fs::write(&path, &text).unwrap();
    let out = run(&["stability", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("part sizes: 2 2 2"), "got {text}");
    assert!(text.contains("bad: 0"), "got {text}");

    // Not orientable: carries the certificate and exits 2.
    let k4 = write_k4_minus(dir.path());
    let out = run(&["stability", k4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bottle"));
}

#[test]
fn tournaments_and_embed() {
    let out = run(&["tournaments", "d5"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("n 5\n"));

    let out = run(&["tournaments", "t5"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("family size: "));

    let out = run(&["embed", "--l1", "7", "--l2", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("t: 2 (minimum 2)"), "got {text}");
    assert!(text.contains("witness: "), "got {text}");

    let bad = run(&["embed", "--l1", "6", "--l2", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn lattice_and_tri_hypergraph() {
    let dir = tempfile::tempdir().unwrap();
    let rainbow = run(&["lattice", "--radius", "3", "--check-rainbow"]);
    assert_eq!(stdout(&rainbow), "RAINBOW true\n");

    let points = stdout(&run(&["lattice", "--radius", "1"]));
    assert_eq!(points.lines().count(), 9);
    let ppath = dir.path().join("patch.txt");
    std::fs::write(&ppath, &points).unwrap();
    let out = run(&[
        "tri-hypergraph",
        "--shape",
        "equilateral",
        "--eps",
        "0",
        ppath.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n 9\n"));
    // Eight unit triangles plus two each of squared sides 3 and 4, as
    // confirmed by the exhaustive coefficient-space scan in the library
    // tests.
    assert_eq!(text.lines().count() - 1, 12);
}

#[test]
fn records_format_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_k4_minus(dir.path());
    let out = bin()
        .args(["--format", "records", "orient", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "outcome=bottle\ncertificate=0 1 2 3 1 0\n");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("manifest subcommand=orient"));
    assert!(stderr.contains("sha256="));
    assert!(stderr.contains("manifest seed=-"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_k4_minus(dir.path());
    for args in [
        vec!["gen", "en", "--n", "15"],
        vec!["orient", path.to_str().unwrap()],
        vec!["turan", "--n", "5", "--family", "fcm", "--l", "11"],
        vec!["lattice", "--radius", "4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
        assert_eq!(a.stderr, b.stderr, "nondeterministic manifest for {args:?}");
    }
}

#[test]
fn exit_codes() {
    // Unknown subcommand: usage error.
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));

    // Unreadable input: invalid input.
    let out = run(&["orient", "/nonexistent/h.txt"]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed hypergraph file: invalid input.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "n 4\ne 0 1 1\n").unwrap();
    let out = run(&["orient", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Resource limit.
    let out = run(&["gen", "en", "--n", "5000"]);
    assert_eq!(out.status.code(), Some(3));

    // Oversized exact search: invalid input.
    let out = run(&["turan", "--n", "9", "--family", "k4-minus"]);
    assert_eq!(out.status.code(), Some(2));

    // Zero worker pool: usage error.
    let out = run(&["--jobs", "0", "gen", "en", "--n", "3", "--count-only"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn max_edges_cap_env_is_honored() {
    let out = bin()
        .env("TURANLAB_MAX_EDGES", "10")
        .args(["gen", "en", "--n", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
