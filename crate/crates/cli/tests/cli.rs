use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn commfam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commfam"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn catalog_file(dir: &TempDir, name: &str, size: usize) -> PathBuf {
    let out = commfam(&["catalog", name, &size.to_string()]);
    assert!(out.status.success());
    let path = dir.path().join(format!("{name}{size}.json"));
    fs::write(&path, &out.stdout).unwrap();
    path
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn analyze_heis3() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "heis", 3);
    let out = commfam(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("ind 1"));
    assert!(s.contains("l 2"));
    assert!(s.contains("nilradical Heisenberg: yes"));
}

#[test]
fn analyze_sl2_and_abelian() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "sl", 2);
    let s = stdout(&commfam(&["analyze", f.to_str().unwrap()]));
    assert!(s.contains("ind 1") && s.contains("l 2") && s.contains("nilradical 0"));
    let f = catalog_file(&dir, "abelian", 3);
    let s = stdout(&commfam(&["analyze", f.to_str().unwrap()]));
    assert!(s.contains("ind 3") && s.contains("l 3"));
}

#[test]
fn analyze_json_matches_text() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "oscillator", 4);
    let text = stdout(&commfam(&["analyze", f.to_str().unwrap()]));
    let json: serde_json::Value = serde_json::from_str(&stdout(&commfam(&[
        "analyze",
        "--json",
        f.to_str().unwrap(),
    ])))
    .unwrap();
    assert!(text.contains(&format!("ind {}", json["index"])));
    assert!(text.contains(&format!("l {}", json["l"])));
}

#[test]
fn complete_heis3() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "heis", 3);
    let out = commfam(&["complete", "--json", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["schema"], 1);
    assert_eq!(cert["verdict"], "complete");
    assert_eq!(cert["family"].as_array().unwrap().len(), 2);
}

#[test]
fn complete_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "sl", 3);
    let a = commfam(&["complete", "--json", "--seed", "11", f.to_str().unwrap()]);
    let b = commfam(&["complete", "--json", "--seed", "11", f.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_bad_family() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "heis", 3);
    let fam = write(&dir, "bad.json", r#"["x", "y"]"#);
    let out = commfam(&["verify", f.to_str().unwrap(), fam.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stdout(&out).contains("= z"));
    let good = write(&dir, "good.json", r#"{"family": ["x", "z"]}"#);
    let out = commfam(&["verify", f.to_str().unwrap(), good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn orbit_sl2() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "sl", 2);
    let out = commfam(&["orbit", f.to_str().unwrap(), "--xi=0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("complete on orbit, ind g_ξ = ind g = 1"));
}

#[test]
fn shift_with_negative_entries() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "gl", 2);
    let out = commfam(&["shift", f.to_str().unwrap(), "--a=1,-2,3,1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("commutativity: pass"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{");
    assert_eq!(
        commfam(&["analyze", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let jacobi = write(
        &dir,
        "jacobi.json",
        r#"{"dim": 3, "basis": ["a", "b", "c"], "brackets": [
            {"i": 0, "j": 1, "result": {"1": "1"}},
            {"i": 0, "j": 2, "result": {"0": "1"}},
            {"i": 1, "j": 2, "result": {"0": "1"}}]}"#,
    );
    assert_eq!(
        commfam(&["analyze", jacobi.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    let sl2 = write(
        &dir,
        "sl2-bare.json",
        r#"{"dim": 3, "basis": ["e", "f", "h"], "brackets": [
            {"i": 0, "j": 1, "result": {"2": "1"}},
            {"i": 2, "j": 0, "result": {"0": "2"}},
            {"i": 2, "j": 1, "result": {"1": "-2"}}]}"#,
    );
    assert_eq!(
        commfam(&["complete", sl2.to_str().unwrap()]).status.code(),
        Some(4)
    );
    let abelian = catalog_file(&dir, "abelian", 2);
    let weak = write(&dir, "weak.json", r#"["x1", "x1^2"]"#);
    assert_eq!(
        commfam(&["verify", abelian.to_str().unwrap(), weak.to_str().unwrap()])
            .status
            .code(),
        Some(5)
    );
}

#[test]
fn catalog_round_trips() {
    let dir = TempDir::new().unwrap();
    for (name, size) in [("sp", 4), ("filiform", 5), ("strictly_upper", 4)] {
        let f = catalog_file(&dir, name, size);
        let again = commfam(&["catalog", name, &size.to_string()]);
        assert_eq!(fs::read(&f).unwrap(), again.stdout);
        let parsed = commfam::liealg::from_json_str(&fs::read_to_string(&f).unwrap())
            .unwrap()
            .0;
        assert_eq!(parsed, commfam::liealg::catalog(name, size).unwrap());
    }
}
