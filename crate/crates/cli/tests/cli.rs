use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphcat"))
        .args(args)
        .env_remove("GRAPHCAT_ROOT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn exit_codes() {
    let all: Vec<String> = ["fig2.graph", "fig8.graph", "diamond.graph", "maps.txt", "operads.txt"]
        .iter()
        .map(|f| fixture(f))
        .collect();
    let mut args = vec!["validate"];
    args.extend(all.iter().map(String::as_str));
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(run(&["validate", &fixture("broken.graph")]).status.code(), Some(1));
    assert_eq!(run(&["validate", "no/such/file.graph"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["emb", &fixture("fig8.graph"), "--graph", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["elements-check", "--functor", "Omega-to-Ucyc"]).status.code(), Some(2));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn emb_lists_boundaries() {
    let out = stdout(&run(&["emb", &fixture("fig2.graph")]));
    assert!(out.lines().any(|l| l == "emb {vertices w} boundary {4, 5, 5†, 6†}"), "{out}");
}

#[test]
fn unions_of_two_vertices() {
    let v = json(&["unions", &fixture("fig8.graph"), "--pair", "left", "right"]);
    let out = stdout(&run(&["unions", &fixture("fig8.graph"), "--pair", "left", "right"]));
    assert!(out.starts_with("3 unions"), "{out}");
    assert_eq!(v["ok"], true);
}

#[test]
fn kan_summands_at_a_star() {
    let out = stdout(&run(&["kan", "--functor", "O0-to-U0", "--presheaf", "terminal", "--object", "star3", &fixture("star3.graph"), "--oracle"]));
    assert!(out.lines().next().unwrap().ends_with("8 summands, 8 elements"), "{out}");
    assert_eq!(out.lines().filter(|l| l.trim_start().starts_with("orientation ")).count(), 8);
}

#[test]
fn map_check_reports_membership() {
    let v = json(&["map-check", &fixture("maps.txt")]);
    assert_eq!(v["ok"], true);
    let out = stdout(&run(&["map-check", &fixture("maps.txt")]));
    assert!(out.contains("span: star2 -> path3 in U, active true"), "{out}");
}

#[test]
fn json_is_versioned_and_deterministic() {
    for args in [
        vec!["emb".to_string(), fixture("fig9.graph")],
        vec!["site-build".into(), "--site".into(), "Ucyc".into()],
        vec!["segal".into(), "--presheaf".into(), "orientation".into(), "--site".into(), "U0".into()],
    ] {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (x, y) = (json(&a), json(&a));
        assert_eq!(x, y);
        assert_eq!(x["version"], 1);
        let mut seq = a.clone();
        seq.push("--sequential");
        assert_eq!(json(&seq)["data"], x["data"], "{args:?}");
    }
}

#[test]
fn flags_override_config() {
    let conf = fixture("small.conf");
    let b = |v: &Value| v["data"]["manifest"]["bounds"].clone();
    let v = json(&["--config", &conf, "site-build", "--site", "Omega"]);
    assert_eq!(b(&v)["max_vertices"], 2);
    assert_eq!(b(&v)["max_edges"], 3);
    let v = json(&["--config", &conf, "site-build", "--site", "Omega", "--max-vertices", "3"]);
    assert_eq!(b(&v)["max_vertices"], 3);
    assert_eq!(b(&v)["max_edges"], 3);
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.conf");
    std::fs::write(&p, "max_vertices=2\ncolour=blue\n").unwrap();
    let o = run(&["--config", p.to_str().unwrap(), "site-build", "--site", "U0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key `colour`"));
}

#[test]
fn export_dot_writes_named_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["export-dot", "diamond", &fixture("diamond.graph"), "--dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let dot = std::fs::read_to_string(dir.path().join("diamond.dot")).unwrap();
    assert!(dot.starts_with("digraph"), "{dot}");
}

#[test]
fn site_manifest_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("u0.json");
    let m = m.to_str().unwrap();
    assert!(run(&["site-build", "--site", "U0", "--out", m]).status.success());
    assert_eq!(run(&["site-build", "--site", "U0", "--check", m]).status.code(), Some(0));
}

#[test]
fn workspace_root_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_graphcat"))
        .args(["emb", "fixtures/fig8.graph"])
        .current_dir(dir.path())
        .env("GRAPHCAT_ROOT", root())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = Command::new(env!("CARGO_BIN_EXE_graphcat"))
        .args(["emb", "fixtures/fig8.graph"])
        .current_dir(dir.path())
        .env_remove("GRAPHCAT_ROOT")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orient_and_free_cyclic() {
    let out = stdout(&run(&["orient", "--graph", "star3", &fixture("star3.graph"), "--orientation", "011"]));
    assert!(!out.is_empty());
    let v = json(&["free-cyclic", "--graph", "path3", &fixture("path3.graph")]);
    assert_eq!(v["ok"], true);
}

#[test]
fn factorization_output_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.txt");
    for map in ["span", "bend", "leg"] {
        let o = run(&["factorize", &fixture("maps.txt"), "--map", map]);
        assert!(o.status.success());
        std::fs::write(&out, &o.stdout).unwrap();
        let o = run(&["map-check", &fixture("maps.txt"), out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{map}: {}", stdout(&o));
        let text = stdout(&o);
        assert!(text.contains(&format!("ok {map}.active:")) && text.contains(&format!("ok {map}.inert:")), "{text}");
    }
}
