use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_simplexforge"));
    cmd.env("SIMPLEXFORGE_THREADS", "2");
    cmd
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], path: &Path) -> Output {
    bin().args(args).arg(path).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const EQUILATERAL: &str = r#"{"labels":["a","b","c"],"d":[["0","1/2","1/2"],["1/2","0","1/2"],["1/2","1/2","0"]]}"#;
const EQUILATERAL_RENAMED: &str =
    r#"{"labels":["p","q","r"],"d":[["0","1/2","1/2"],["1/2","0","1/2"],["1/2","1/2","0"]]}"#;
const ISOSCELES: &str = r#"{"labels":["p","q","r"],"d":[["0","1/2","1/4"],["1/2","0","1/2"],["1/4","1/2","0"]]}"#;
const NOT_METRIC: &str = r#"{"labels":["a","b","c"],"d":[["0","1/4","1"],["1/4","0","1/4"],["1","1/4","0"]]}"#;

fn seven_points() -> String {
    let labels: Vec<String> = (0..7).map(|i| format!("\"x{i}\"")).collect();
    let rows: Vec<String> = (0..7)
        .map(|i| {
            let row: Vec<&str> = (0..7).map(|j| if i == j { "\"0\"" } else { "\"1\"" }).collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    format!(r#"{{"labels":[{}],"d":[{}]}}"#, labels.join(","), rows.join(","))
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", EQUILATERAL);
    let bad = write(&dir, "bad.json", NOT_METRIC);
    let junk = write(&dir, "junk.json", "{\"labels\":");

    let out = run(&["validate"], &good);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["points"], 3);

    let out = run(&["validate"], &bad);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["violation"]["violation"], "triangle");

    assert_eq!(run(&["validate"], &junk).status.code(), Some(3));
    assert_eq!(
        run(&["validate"], &dir.path().join("missing.json")).status.code(),
        Some(3)
    );
}

#[test]
fn roundtrip_passes_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", EQUILATERAL);
    let a = run(&["roundtrip"], &x);
    let b = run(&["roundtrip"], &x);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["passed"], true);
    assert_eq!(report["result"]["all_contained"], true);
    assert!(report.get("timings_ms").is_none());
    assert_eq!(report["config"]["resolved"]["depth"], 9);

    let timed = run(&["roundtrip", "--timings"], &x);
    assert!(json(&timed).get("timings_ms").is_some());
}

#[test]
fn roundtrip_against() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", EQUILATERAL);
    let y = write(&dir, "y.json", EQUILATERAL_RENAMED);
    let z = write(&dir, "z.json", ISOSCELES);

    let out = bin().args(["roundtrip", "--against"]).arg(&y).arg(&x).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let against = &json(&out)["result"]["against"];
    assert_eq!(against["isometric"], true);
    assert_eq!(against["matching_permutations"], 6);

    let out = bin().args(["roundtrip", "--against"]).arg(&z).arg(&x).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let against = &json(&out)["result"]["against"];
    assert_eq!(against["isometric"], false);
    assert_eq!(against["matching_permutations"], 0);
    assert_eq!(against["decoded_differs"], true);
}

#[test]
fn roundtrip_guard() {
    let dir = TempDir::new().unwrap();
    let big = write(&dir, "big.json", &seven_points());
    assert_eq!(run(&["validate"], &big).status.code(), Some(0));
    assert_eq!(run(&["roundtrip"], &big).status.code(), Some(4));
}

#[test]
fn build_kinds() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", EQUILATERAL);
    for kind in ["sext", "blowup", "phi"] {
        let out = run(&["build", "--kind", kind, "--depth", "3"], &x);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        assert_eq!(json(&out)["config"]["kind"], kind);
    }
    // A stage over the first two points cannot host a scheme that uses the third.
    let out = run(&["build", "--kind", "blowup", "--n", "2", "--depth", "4"], &x);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["build", "--widths", "1/3"], &x);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_writes_out_file() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", EQUILATERAL);
    let target = dir.path().join("phi.json");
    let out = bin()
        .args(["build", "--depth", "2", "--out"])
        .arg(&target)
        .arg(&x)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["command"], "build");
}

#[test]
fn verify_suites() {
    let dir = TempDir::new().unwrap();
    let out = bin()
        .args(["verify", "--suite", "geometry", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);

    let x = write(&dir, "x.json", EQUILATERAL);
    assert_eq!(run(&["verify", "--suite", "codec"], &x).status.code(), Some(0));

    let poly = write(
        &dir,
        "p.json",
        r#"{"dim":2,"vertices":[["0","0"],["1","0"],["3/2","1"]]}"#,
    );
    let out = run(&["verify", "--suite", "geometry"], &poly);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    let failed: Vec<&str> = report["result"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["vertices-in-cube"]);
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", r#"{"labels":["a","b"],"d":[["0","1/0"],["1/0","0"]]}"#);
    assert_eq!(run(&["validate"], &x).status.code(), Some(3));
}

#[test]
fn two_points_at_depth_three() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", r#"{"labels":["a","b"],"d":[["0","1/2"],["1/2","0"]]}"#);
    let out = run(&["roundtrip", "--depth", "3"], &x);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["all_contained"], true);
    assert_eq!(report["result"]["max_width"], "1/8");
    assert_eq!(report["config"]["depth"], 3);
    assert_eq!(report["config"]["seed"], 0);

    let out = run(&["build", "--kind", "sext"], &x);
    let v = &json(&out)["result"]["polytope"]["vertices"];
    assert_eq!(*v, serde_json::json!([["0/1", "1/2"], ["1/2", "0/1"]]));
}
