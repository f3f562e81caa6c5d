use std::path::Path;
use std::process::{Command, Output};

use happy_core::io::parse_instance;

fn happy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_happy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const STAR: &str = "p mhv 5 3 4\ne 1 2\ne 1 3\ne 1 4\ne 1 5\nc 2 1\n";

#[test]
fn star_yes_with_auto_repetitions() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "star.txt", STAR);
    let o = happy(&[
        "solve",
        "--input",
        &f,
        "--algo",
        "randomized",
        "--reps",
        "auto",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("decision: yes"));
}

#[test]
fn split_edge_is_no() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "edge.txt", "p mhv 2 2 1\ne 1 2\nc 1 1\nc 2 2\n");
    let o = happy(&["solve", "--input", &f, "--algo", "brute"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("optimum: 0"));
}

#[test]
fn randomized_on_mhe_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "edge.txt", "p mhe 2 2 1\ne 1 2\n");
    let o = happy(&["solve", "--input", &f, "--algo", "randomized"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mhv instances only"));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "bad.txt", "p mhv 2 2 1\ne 1 1\n");
    let o = happy(&["solve", "--input", &f, "--algo", "brute"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn json_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "star.txt", STAR);
    let run = || {
        let o = happy(&[
            "solve",
            "--input",
            &f,
            "--algo",
            "randomized",
            "--seed",
            "9",
            "--json",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["schema"], 1);
        v["stats"]["millis"] = serde_json::Value::Null;
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn kernel_dp_solves_mhe() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(
        dir.path(),
        "k4.txt",
        "p mhe 4 2 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n",
    );
    let o = happy(&["solve", "--input", &f, "--algo", "kernel-dp", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decision"], true);
}

#[test]
fn reduce_x3c_writes_gadget_and_mapper() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "x3c.txt", "u 3\ns 1 2 3\n");
    let out = dir.path().join("gadget.txt");
    let o = happy(&[
        "reduce",
        "--from",
        "x3c",
        "--input",
        &f,
        "--output",
        out.to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("p mhe 9 2 12"));
    parse_instance(&text).unwrap();
    let map: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("gadget.txt.map.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(map["guarantee"]["value"], 11);
    assert_eq!(map["mapper"]["elements"], serde_json::json!([1, 2, 3]));
}

#[test]
fn reduce_brds_header() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "brds.txt", "u 2\ns 1\ns 2\n");
    let out = dir.path().join("g.txt");
    let o = happy(&[
        "reduce",
        "--from",
        "brds",
        "--input",
        &f,
        "--output",
        out.to_str().unwrap(),
        "--k",
        "2",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("p mhe 6 2 4"));
}

#[test]
fn reduce_reports_precondition_failures() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "brds.txt", "u 3\ns 1 2\ns 3\n");
    let out = dir.path().join("g.txt");
    let o = happy(&[
        "reduce",
        "--from",
        "brds",
        "--input",
        &f,
        "--output",
        out.to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("has size"));
}

#[test]
fn over_budget_verify_warns() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("u 30\n");
    for e in 1..=30 {
        text.push_str(&format!("s {e}\n"));
    }
    let f = put(dir.path(), "big.txt", &text);
    let out = dir.path().join("g.txt");
    let o = happy(&[
        "reduce",
        "--from",
        "set-packing",
        "--input",
        &f,
        "--output",
        out.to_str().unwrap(),
        "--k",
        "3",
        "--verify",
        "--budget",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification skipped"));
}

#[test]
fn reduce_independent_set_with_unique_colors() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "tri.txt", "p mhv 3 1 1\ne 1 2\ne 1 3\ne 2 3\n");
    let out = dir.path().join("g.txt");
    let o = happy(&[
        "reduce",
        "--from",
        "is",
        "--input",
        &f,
        "--output",
        out.to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("source yes, gadget yes"));
    let o = happy(&[
        "reduce",
        "--from",
        "is",
        "--input",
        &f,
        "--output",
        out.to_str().unwrap(),
        "--k",
        "2",
        "--verify",
    ]);
    assert!(stdout(&o).contains("source no, gadget no"));
}

#[test]
fn generate_then_bench() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..3 {
        let out = dir.path().join(format!("g{seed}.txt"));
        let o = happy(&[
            "generate",
            "--n",
            "6",
            "--ell",
            "2",
            "--seed",
            &seed.to_string(),
            "--k",
            "1",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let suite = put(
        dir.path(),
        "suite.json",
        r#"{"instances": ["g0.txt", "g1.txt", "g2.txt", "missing.txt"],
            "solvers": [{"algo": "brute"}, {"name": "rand", "algo": "randomized", "seed": 4}]}"#,
    );
    let out = dir.path().join("report");
    let o = happy(&["bench", "--suite", &suite, "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("instance,solver,seed,decision,value,millis"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    let records = json["records"].as_array().unwrap();
    assert_eq!(records.len(), 8);
    assert_eq!(records.iter().filter(|r| !r["error"].is_null()).count(), 2);
}

#[test]
fn generate_is_deterministic() {
    let a = happy(&["generate", "--n", "8", "--ell", "3", "--seed", "42"]);
    let b = happy(&["generate", "--n", "8", "--ell", "3", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    parse_instance(&stdout(&a)).unwrap();
}
