use std::path::Path;
use std::process::{Command, Output};

fn dcnet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcnet"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to spawn dcnet")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = dcnet(dir, args);
    assert!(
        out.status.success(),
        "dcnet {args:?} failed:\n{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn td_build_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["td", "build", "--delta", "3", "--k", "2", "--out", "td.json"]);
    let text = ok(dir.path(), &["td", "verify", "--in", "td.json"]);
    assert!(text.contains("valid [3,2]-transversal design"), "{text}");
}

#[test]
fn construct_route_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["base", "cycle", "--n", "4", "--out", "base.json"]);
    ok(dir.path(), &["td", "build", "--delta", "2", "--k", "2", "--out", "td.json"]);
    ok(
        dir.path(),
        &["construct", "two-step", "--base", "base.json", "--td", "td.json", "--out", "h.json"],
    );
    ok(
        dir.path(),
        &[
            "route", "one-to-one", "--graph", "h.json", "--src", "e0.b0_0", "--dst", "e2.b1_1",
            "--emit-paths", "paths.json",
        ],
    );
    let text = ok(
        dir.path(),
        &["verify", "paths", "--graph", "h.json", "--paths", "paths.json", "--mode", "internal"],
    );
    assert!(text.starts_with("ok:"), "{text}");
    let text = ok(
        dir.path(),
        &["verify", "sweep", "--graph", "h.json", "--routine", "one-to-one"],
    );
    assert!(text.contains("0 failures"), "{text}");
}

#[test]
fn table_prints_eight_rows() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["dcn", "table-qfz"]);
    assert_eq!(text.lines().count(), 8, "{text}");
    assert!(text.lines().next().unwrap().starts_with("fat-tree"), "{text}");
}

#[test]
fn counts_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(
        dir.path(),
        &[
            "--json", "dcn", "counts", "--n", "346", "--e", "346", "--d", "8", "--delta", "8",
            "--k", "8", "--c", "4", "--method", "a",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["servers"], 708_608);
    assert_eq!(v["ports"], 64);
}

#[test]
fn exit_codes_distinguish_domain_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dcnet(dir.path(), &["td", "build", "--delta", "9", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = dcnet(dir.path(), &["td", "verify", "--in", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}
