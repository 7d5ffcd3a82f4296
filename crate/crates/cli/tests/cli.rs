use std::path::{Path, PathBuf};

use serde_json::Value;

use dualdefect_cli::{run, Outcome};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn dd(args: &[&str]) -> Outcome {
    let mut argv = vec!["dualdefect"];
    argv.extend_from_slice(args);
    run(argv)
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out.stdout))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dualdefect-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const FIXTURES: [&str; 6] = ["ex5_7.json", "ex5_8.json", "p1xp2.json", "segre.json", "simplex2.txt", "simplex3.txt"];

#[test]
fn analyze_with_seed() {
    let out = dd(&["analyze", &fixture("ex5_8.json"), "--seed", "7"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!((v["delta"].clone(), v["r"].clone(), v["c"].clone()), (1.into(), 2.into(), 1.into()));
    assert_eq!(v["seed"], Value::from(7));
}

#[test]
fn oracle_on_segre_square() {
    let out = dd(&["oracle", &fixture("segre.json")]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["delta"], Value::from(0));
    assert_eq!(v["status"], Value::from("Computed"));
}

#[test]
fn simplex_has_empty_dual_and_trivial_certificate() {
    let out = dd(&["analyze", &fixture("simplex3.txt")]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["oracle_delta"], Value::from("EmptyDual"));
    assert_eq!((v["r"].clone(), v["c"].clone(), v["delta"].clone()), (0.into(), 0.into(), 0.into()));
    let oracle = json(&dd(&["oracle", &fixture("simplex3.txt")]));
    assert_eq!(oracle["status"], Value::from("EmptyDual"));
}

#[test]
fn p1_times_p2_has_defect_one() {
    let v = json(&dd(&["analyze", &fixture("p1xp2.json")]));
    assert_eq!(v["delta"], Value::from(1));
}

#[test]
fn output_is_deterministic() {
    for name in FIXTURES {
        let a = dd(&["analyze", &fixture(name)]);
        let b = dd(&["analyze", &fixture(name)]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
    let dir = fixtures().display().to_string();
    assert_eq!(dd(&["batch", &dir]).stdout, dd(&["batch", &dir]).stdout);
}

#[test]
fn hex_and_decimal_seeds_agree() {
    let a = dd(&["analyze", &fixture("ex5_8.json"), "--seed", "0xA11CE"]);
    let b = dd(&["analyze", &fixture("ex5_8.json"), "--seed", "659918"]);
    let c = dd(&["analyze", &fixture("ex5_8.json")]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn verify_accepts_every_fixture_certificate() {
    let dir = scratch("verify");
    for name in FIXTURES {
        let cert = dir.join(format!("{name}.cert.json"));
        let cert = cert.display().to_string();
        let out = dd(&["analyze", &fixture(name), "--out", &cert]);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        assert!(out.stdout.is_empty());
        let out = dd(&["verify", &fixture(name), &cert, "--exhaustive"]);
        assert_eq!(out.code, 0, "{name}: {}", out.stdout);
        assert_eq!(json(&out)["passed"], Value::Bool(true));
    }
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = scratch("tamper");
    let mut v = json(&dd(&["analyze", &fixture("ex5_8.json")]));
    v["delta"] = Value::from(2);
    let cert = dir.join("bad.json");
    std::fs::write(&cert, v.to_string()).unwrap();
    let out = dd(&["verify", &fixture("ex5_8.json"), &cert.display().to_string()]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["checks"]["delta_eq_r_minus_c"], Value::Bool(false));
}

#[test]
fn malformed_certificate_is_an_input_error() {
    let dir = scratch("malformed");
    let cert = dir.join("cert.json");
    std::fs::write(&cert, r#"{"n": 2}"#).unwrap();
    let out = dd(&["verify", &fixture("segre.json"), &cert.display().to_string()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("malformed"));
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let j = json(&dd(&["analyze", &fixture("ex5_7.json")]));
    let t = dd(&["analyze", &fixture("ex5_7.json"), "--format", "text"]).stdout;
    for key in ["n", "r", "c", "delta", "seed", "bound", "trials", "oracle_delta"] {
        let expect = match &j[key] {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        assert!(t.contains(&format!("{key}: {expect}\n")), "{key} in {t}");
    }
    let pi1: Vec<Vec<i64>> = serde_json::from_value(j["pi1"].clone()).unwrap();
    let rendered: Vec<String> =
        pi1.iter().map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(", "))).collect();
    assert!(t.contains(&format!("pi1: [{}]\n", rendered.join(", "))));
}

#[test]
fn input_errors_exit_two() {
    let dir = scratch("input");
    assert_eq!(dd(&["analyze", "/definitely/not/here.json"]).code, 2);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(dd(&["analyze", &bad.display().to_string()]).code, 2);
    let ragged = dir.join("ragged.txt");
    std::fs::write(&ragged, "0 0\n1\n").unwrap();
    assert_eq!(dd(&["analyze", &ragged.display().to_string()]).code, 2);
    assert_eq!(dd(&["analyze"]).code, 2);
    assert_eq!(dd(&["frobnicate"]).code, 2);
    assert_eq!(dd(&["analyze", &fixture("segre.json"), "--seed", "banana"]).code, 2);
}

#[test]
fn duplicates_warn_on_stderr_only() {
    let dir = scratch("dups");
    let path = dir.join("dups.txt");
    std::fs::write(&path, "# segre square with a repeat\n0 0\n1 0\n0 1\n1 1\n1 0\n").unwrap();
    let out = dd(&["analyze", &path.display().to_string()]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("warning") && out.stderr.contains("duplicate"));
    assert_eq!(out.stderr.matches("warning").count(), 1);
    assert_eq!(json(&out)["delta"], Value::from(0));
}

#[test]
fn non_spanning_input_is_normalized_with_a_warning() {
    let dir = scratch("normalize");
    let path = dir.join("scaled.json");
    std::fs::write(&path, r#"{"name": "scaled", "points": [[0,0,5],[2,0,5],[0,2,5],[2,2,5]]}"#).unwrap();
    let out = dd(&["analyze", &path.display().to_string()]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("affine lattice"));
    assert_eq!(json(&out)["n"], Value::from(2));
}

#[test]
fn gen_is_deterministic_and_carries_expected_delta() {
    let a = dd(&["gen", "cayley_join_type", "--r", "1", "--count", "4", "--seed", "3"]);
    let b = dd(&["gen", "cayley_join_type", "--r", "1", "--count", "4", "--seed", "3"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let corpus = json(&a);
    assert_eq!(corpus.as_array().unwrap().len(), 4);
    assert!(corpus.as_array().unwrap().iter().all(|c| c["expected_delta"] == 1));
}

#[test]
fn gen_twist_of_segre_square_expects_zero() {
    let v = json(&dd(&["gen", "unimodular_twist", "--input", &fixture("segre.json"), "--count", "3"]));
    assert!(v.as_array().unwrap().iter().all(|c| c["expected_delta"] == 0));
}

#[test]
fn gen_rejects_out_of_range_parameters() {
    assert_eq!(dd(&["gen", "random", "--dim", "9"]).code, 2);
    assert_eq!(dd(&["gen", "random", "--points", "15"]).code, 2);
    assert_eq!(dd(&["gen", "cayley_join_type", "--r", "8"]).code, 2);
    assert_eq!(dd(&["gen", "unimodular_twist"]).code, 2);
    assert_eq!(dd(&["gen", "random", "--dim", "3", "--points", "7"]).code, 0);
}

#[test]
fn batch_over_generated_corpus() {
    let dir = scratch("batch");
    let d = dir.display().to_string();
    assert_eq!(dd(&["gen", "cayley_join_type", "--r", "2", "--count", "5", "--out-dir", &d]).code, 0);
    assert_eq!(dd(&["gen", "random", "--count", "5", "--out-dir", &d]).code, 0);
    let out = dd(&["batch", &d]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v = json(&out);
    let files: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["file"].as_str().unwrap()).collect();
    let mut sorted = files.clone();
    sorted.sort();
    assert_eq!(files, sorted);
    assert_eq!(v["files"], Value::from(10));
}

#[test]
fn batch_reports_failures_without_aborting() {
    let dir = scratch("batch-fail");
    std::fs::copy(fixtures().join("segre.json"), dir.join("a.json")).unwrap();
    std::fs::write(dir.join("b.json"), "nope").unwrap();
    std::fs::write(dir.join("c.json"), r#"{"points": [[0,0],[1,0],[0,1],[1,1]], "expected_delta": 3}"#).unwrap();
    std::fs::copy(fixtures().join("p1xp2.json"), dir.join("d.json")).unwrap();
    let out = dd(&["batch", &dir.display().to_string()]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    let status: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["ok", "error", "failed", "ok"]);
    assert_eq!(v["failed"], Value::from(2));
}

#[test]
fn analyze_exhaustive_appends_checks() {
    let v = json(&dd(&["analyze", &fixture("ex5_8.json"), "--exhaustive"]));
    assert_eq!(v["checks"]["lower_bound"], Value::Bool(true));
    assert_eq!(v["checks"]["minimality"], Value::Bool(true));
    let out = dd(&["analyze", &fixture("ex5_7.json"), "--exhaustive", "--exhaustive-limit", "10"]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("skipped"));
}
