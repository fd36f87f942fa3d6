use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn morita(ws: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morita"))
        .args(args)
        .arg("--workspace")
        .arg(ws)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn strict_identity() {
    let o = morita(
        &fixture("t2_corner.json"),
        &["strict", "--context", "identity"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("strict: true"));
}

#[test]
fn strict_corner_fails_with_exit_one() {
    let o = morita(
        &fixture("t2_corner.json"),
        &["strict", "--context", "t2corner"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("strict: false"));
}

#[test]
fn localize_regular() {
    let o = morita(
        &fixture("t2_corner.json"),
        &["localize", "--module", "T2reg", "--ideal", "I"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("localized dim 1"));
}

#[test]
fn equiv_reports_trace_ideal() {
    let o = morita(
        &fixture("t2_corner.json"),
        &["equiv", "--context", "t2corner", "--max-dim", "3"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("I = 2-dim, idempotent (exponent 1)"));
}

#[test]
fn graded_equiv_passes() {
    let o = morita(
        &fixture("t2_corner.json"),
        &["graded-equiv", "--context", "t2corner", "--max-dim", "2"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn machine_report_shape() {
    let o = morita(
        &fixture("m2_corner.json"),
        &[
            "equiv-strict",
            "--context",
            "m2corner",
            "--max-dim",
            "4",
            "--s-max-dim",
            "2",
            "--format",
            "machine",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["command", "inputs", "seed", "verdicts", "summary"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "equiv-strict");
    assert_eq!(v["summary"]["pass"], true);
}

#[test]
fn context_iso_and_compose() {
    let ws = fixture("t2_corner.json");
    assert_eq!(
        morita(&ws, &["iso", "--context", "t2raw", "--context", "identity"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        morita(
            &ws,
            &["compose", "--context", "identity", "--context", "t2corner"]
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        morita(&ws, &["iso", "--module", "P2", "--module", "S2"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn input_errors_exit_two() {
    let ws = fixture("t2_corner.json");
    assert_eq!(morita(&ws, &["frobnicate"]).status.code(), Some(2));
    let o = morita(&ws, &["localize", "--module", "nope", "--ideal", "I"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'nope'"));
    assert_eq!(
        morita(
            &ws,
            &["compose", "--context", "t2corner", "--context", "identity"]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn dangling_reference_in_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ws.json");
    std::fs::write(
        &path,
        r#"{"field":{"kind":"gf","p":2},"catalogs":{"c":{"algebra":"A","modules":[]}}}"#,
    )
    .unwrap();
    let o = morita(&path, &["validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("catalogs.c.algebra: unknown algebra 'A'"));
}

#[test]
fn rational_workspace_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(
        &path,
        r#"{"field":{"kind":"rationals"},
            "algebras":{"k":{"dim":1,"unit":["1/1"],"mul":[[["1"]]]}},
            "modules":{"V":{"algebra":"k","dim":2,"action":[[["1",0],[0,"2/2"]]]}}}"#,
    )
    .unwrap();
    let o = morita(&path, &["validate"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}
