//! End-to-end runs of the `divorce` binary on the fixture files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_divorce")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn f(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn check_reports_blocking_pairs() {
    let r = run(&["check", &f("example1.txt"), &f("example1_m0.txt")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("not stable; blocking: {u2,w2},{u4,w4}"), "{}", r.stdout);

    let r = run(&["check", &f("example1.txt"), &f("example1_man_optimal.txt")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().any(|l| l == "stable"));
}

#[test]
fn parse_and_semantic_failures_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = dir.path().join("bad.txt");
    std::fs::write(&malformed, "side LEFT u1\n").unwrap();
    let r = run(&["check", malformed.to_str().unwrap(), &f("example1_m0.txt")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 1, column"), "{}", r.stderr);

    let non_mutual = dir.path().join("nm.txt");
    std::fs::write(&non_mutual, "side LEFT: u1\nside RIGHT: w1\npref u1: w1\n").unwrap();
    let r = run(&["check", non_mutual.to_str().unwrap(), &f("example1_m0.txt")]);
    assert_eq!(r.code, 4);

    let unacceptable = dir.path().join("m.txt");
    std::fs::write(&unacceptable, "pair u3 w1\n").unwrap();
    let r = run(&["check", &f("nonstable_sink.txt"), unacceptable.to_str().unwrap()]);
    assert_eq!(r.code, 4);

    assert_eq!(run(&["check", "/definitely/not/here", &f("example1_m0.txt")]).code, 2);
}

#[test]
fn reach_exit_codes() {
    let r = run(&["reach", &f("example1.txt"), &f("example1_m0.txt")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("witness (1 step): u2 w2"), "{}", r.stdout);

    assert_eq!(run(&["reach", &f("example1.txt"), &f("example1_n0.txt")]).code, 1);
    assert_eq!(run(&["reach", &f("example1.txt"), &f("example1_n0.txt"), "--max-nodes", "2"]).code, 3);
    assert_eq!(run(&["reach", &f("example1.txt"), &f("example1_n0.txt"), "--parallel", "3"]).code, 1);
    assert_eq!(run(&["reach", &f("example1.txt"), &f("example1_m0.txt"), "--both-matched"]).code, 0);
}

#[test]
fn reach_json_follows_the_schema() {
    let r = run(&["reach", &f("example1.txt"), &f("example1_n0.txt"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["kind"], "NOT_REACHABLE");
    assert!(v["witness"].is_null());
    assert!(v["explored"].as_u64().unwrap() <= 24);
    assert!(v["frontier_peak"].is_u64());

    let r = run(&["reach", &f("example1.txt"), &f("example1_m0.txt"), "--json"]);
    let v: divorce::json::VerdictJson = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v.witness, Some(vec![["u2".to_owned(), "w2".to_owned()]]));
}

#[test]
fn reach_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let r = run(&["reach", &f("example1.txt"), &f("example1_m0.txt"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph divorce {"));
    assert!(text.contains("label=\"u2,w2\""));
}

#[test]
fn reduce_prints_sizes_and_writes_artifacts() {
    for (graph, size) in [("k2.graph", 8), ("edgeless3.graph", 6), ("k3.graph", 18)] {
        let dir = tempfile::tempdir().unwrap();
        let r = run(&["reduce", &f(graph), "--out-dir", dir.path().to_str().unwrap()]);
        assert_eq!(r.code, 0);
        assert!(r.stdout.starts_with(&format!("{size} agents per side")), "{}", r.stdout);
        for file in ["instance.txt", "m0.txt", "meta.json"] {
            assert!(dir.path().join(file).exists());
        }
    }
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run(&["reduce", &f("k2.graph"), "--out-dir", d]).code, 0);
    for (vertices, len) in [("v1", 4), ("v_2", 5), ("2", 5)] {
        let cert = dir.path().join("c.cert");
        let r = run(&["certify", &f("k2.graph"), vertices, "--out", cert.to_str().unwrap()]);
        assert_eq!(r.code, 0);
        assert!(r.stdout.contains(&format!("VERIFIED stable, length {len}")), "{}", r.stdout);
        let r = run(&["verify", &format!("{d}/instance.txt"), &format!("{d}/m0.txt"), cert.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        assert_eq!(r.stdout.lines().filter(|l| l.starts_with("step ")).count(), len);
    }
    let r = run(&["certify", &f("k2.graph"), "v1 v2"]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("expected k = 1"));
    assert_eq!(run(&["certify", &f("k2.graph"), "v1,v2"]).code, 4);
    assert_eq!(run(&["certify", &f("k2.graph"), "v7"]).code, 4);
}

#[test]
fn verify_rejections() {
    let r = run(&["verify", &f("example1.txt"), &f("example1_m0.txt"), &f("example1_step.cert")]);
    assert_eq!(r.code, 0);

    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("bad.cert");
    std::fs::write(&cert, "step u1 w1\n").unwrap();
    let r = run(&["verify", &f("example1.txt"), &f("example1_m0.txt"), cert.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("rejected at step 0: NOT_BLOCKING"), "{}", r.stdout);

    std::fs::write(&cert, "").unwrap();
    let r = run(&["verify", &f("example1.txt"), &f("example1_m0.txt"), cert.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("not stable"));
}

#[test]
fn atlas_summaries() {
    let r = run(&["atlas", &f("example1.txt"), "--root", &f("example1_n0.txt"), "--stats"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("nodes with path to stable: 0"), "{}", r.stdout);

    let r = run(&["atlas", &f("example1.txt"), "--root", &f("example1_m0.txt")]);
    assert!(r.stdout.contains("[stable]"));

    let r = run(&["atlas", &f("single_pair.txt")]);
    for line in ["nodes: 2", "arcs: 1", "sinks: 1"] {
        assert!(r.stdout.lines().any(|l| l == line), "{}", r.stdout);
    }

    let r = run(&["atlas", &f("nonstable_sink.txt")]);
    assert!(r.stdout.contains("u1-w2 u2-w1 u3-w3 [NOT stable]"), "{}", r.stdout);

    assert_eq!(run(&["atlas", &f("example1.txt"), "--limit", "10"]).code, 3);
}

#[test]
fn claim1_on_certificate_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    run(&["reduce", &f("k2.graph"), "--out-dir", d]);
    let r = run(&["claim1", &f("k2.graph"), &format!("{d}/m0.txt")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("2. every x_j is matched to y_j: FAILS (x_1)"), "{}", r.stdout);
}

#[test]
fn export_json_round_trips() {
    let r = run(&["export-json", &f("example1.txt"), &f("example1_m0.txt")]);
    assert_eq!(r.code, 0);
    let j: divorce::json::InstanceJson = serde_json::from_str(&r.stdout).unwrap();
    let (inst, m) = j.to_instance().unwrap();
    assert_eq!(inst, divorce_core::fixtures::example1());
    assert_eq!(m, Some(divorce_core::fixtures::example1_m0(&inst)));
}
