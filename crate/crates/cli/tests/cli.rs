use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prenichols"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn catalog_show_round_trips_through_analyze() {
    let list = run(&["catalog", "list"]);
    assert!(list.status.success());
    assert!(stdout(&list).lines().any(|l| l.starts_with("br25-W\t")));

    let dir = tempfile::tempdir().unwrap();
    let show = run(&["catalog", "show", "br25-V"]);
    assert!(show.status.success());
    let path = write(&dir, "v.json", &stdout(&show));
    let a = run(&["analyze", &path]);
    let b = run(&["analyze", "br25-V"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn reflecting_twice_is_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let w = run(&["reflect", "br25-V", "-i", "2"]);
    assert!(w.status.success());
    let doc: Value = serde_json::from_str(&stdout(&w)).unwrap();
    assert_eq!(doc["matrix"][0][0], "-z^3");
    assert_eq!(doc["matrix"][1][1], "-1");

    let path = write(&dir, "w.json", &stdout(&w));
    let back = run(&["reflect", &path, "-i", "2"]);
    let doc: Value = serde_json::from_str(&stdout(&back)).unwrap();
    let v: Value = serde_json::from_str(&stdout(&run(&["catalog", "show", "br25-V"]))).unwrap();
    assert_eq!(doc["matrix"], v["matrix"]);
}

#[test]
fn rank_one_input_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "a1.json",
        r#"{"zeta_order": 5, "size": 1, "matrix": [["z^2"]]}"#,
    );
    let o = run(&["analyze", &path]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn passing_checks_exit_zero() {
    assert_eq!(
        run(&["verify", "br25-basic", "br25-V"]).status.code(),
        Some(0)
    );
    let o = run(&[
        "verify",
        "power-coproduct",
        "br25-V",
        "--i",
        "1",
        "--N",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn hilbert_coefficients() {
    let o = run(&[
        "hilbert",
        "br25-V",
        "--degree",
        "5",
        "--algebra",
        "prenichols",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let coeff = |d: &str| {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{d}\t")).map(str::to_owned))
            .unwrap()
    };
    assert_eq!(coeff("(0,0)"), "1");
    assert_eq!(coeff("(5,0)"), "1");
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    assert_eq!(run(&["analyze", &bad]).status.code(), Some(2));

    let inf = write(
        &dir,
        "inf.json",
        r#"{"zeta_order": 4, "size": 2, "matrix": [["z","z"],["1","z"]]}"#,
    );
    assert_eq!(run(&["analyze", &inf]).status.code(), Some(3));

    let o = run(&[
        "--cap-words",
        "10",
        "verify",
        "left-coproduct",
        "br25-V",
        "--root",
        "3,2",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn json_report_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "verify",
        "adjoint-coproducts",
        "br25-V",
        "--i",
        "1",
        "--j",
        "2",
        "--N",
        "3",
        "--json",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    for key in [
        "check",
        "label",
        "params",
        "passed",
        "data",
        "runtime_ms",
        "tool_version",
        "input_hash",
    ] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["check"], "adjoint-coproducts");
    assert_eq!(r["passed"], true);
    assert_eq!(r["input_hash"].as_str().unwrap().len(), 64);
}
