use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use maxent_core::cli;

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run_in(dir: &Path, args: &[&str], stdin: &str) -> (i32, String, String) {
    let prev = std::env::current_dir().unwrap();
    let full: Vec<String> = std::iter::once("maxent".to_string())
        .chain(args.iter().map(|a| {
            if a.starts_with("data/") {
                dir.join(a).to_string_lossy().into_owned()
            } else {
                a.to_string()
            }
        }))
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(full, &mut stdin.as_bytes(), &mut out, &mut err);
    assert_eq!(std::env::current_dir().unwrap(), prev);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_in(&tests_dir(), args, "")
}

/// Token-wise comparison: numbers within 1e-12 relative, everything else exact.
fn same_output(actual: &str, expected: &str) -> bool {
    let split = |s: &str| -> Vec<String> {
        s.split(|c: char| c.is_whitespace() || "[],:{}\"".contains(c))
            .filter(|t| !t.is_empty())
            .flat_map(|t| t.split(',').map(str::to_string).collect::<Vec<_>>())
            .collect()
    };
    let (a, e) = (split(actual), split(expected));
    a.len() == e.len()
        && a.iter().zip(&e).all(|(x, y)| match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(p), Ok(q)) => (p - q).abs() <= 1e-12 * p.abs().max(q.abs()).max(1e-300) || p == q,
            _ => x == y,
        })
}

#[test]
fn golden_files() {
    let golden = tests_dir().join("golden");
    let mut cases: Vec<_> = fs::read_dir(&golden).unwrap().map(|e| e.unwrap().path()).collect();
    cases.sort();
    assert!(cases.len() >= 10);
    for case in cases {
        let args = fs::read_to_string(case.join("args")).unwrap();
        let args: Vec<&str> = args.lines().collect();
        let code: i32 = fs::read_to_string(case.join("code")).unwrap().trim().parse().unwrap();
        let stdout = fs::read_to_string(case.join("stdout")).unwrap();
        let (got_code, got_out, got_err) = run(&args);
        assert_eq!(got_code, code, "{}: stderr {got_err}", case.display());
        assert!(
            same_output(&got_out, &stdout),
            "{}:\n--- got\n{got_out}\n--- expected\n{stdout}",
            case.display()
        );
        if code != 0 {
            assert!(got_err.starts_with("error: "), "{}: {got_err}", case.display());
        }
    }
}

fn json_field<'a>(v: &'a serde_json::Value, path: &[&str]) -> &'a serde_json::Value {
    path.iter().fold(v, |v, k| &v[*k])
}

/// Raw text of `"pmf": [...]` inside the solution object.
fn pmf_text(report: &str) -> String {
    let start = report.rfind("\"pmf\"").unwrap();
    let end = start + report[start..].find(']').unwrap();
    report[start..=end].to_string()
}

#[test]
fn report_round_trip_reproduces_pmf_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, input) in [
        ("solve-ml", r#"{"potential": [0, 1, 2, 3.5], "frequencies": [0.1, 0.2, 0.3, 0.4]}"#),
        ("solve-maxent", r#"{"u": [-1, 0.3, 2], "r": [0.2, 0.5, 0.3]}"#),
        ("solve-inverse", r#"{"X": [[0, 1, 2, 3], [1, -1, 0.5, 0]], "y": [1.4, 0.1]}"#),
    ] {
        let first_path = dir.path().join("first.json");
        fs::write(&first_path, input).unwrap();
        let (code, first, _) = run(&[cmd, first_path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let second_path = dir.path().join("second.json");
        fs::write(&second_path, &first).unwrap();
        let (code, second, _) = run(&[cmd, second_path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(pmf_text(&first), pmf_text(&second), "{cmd}");
        assert_eq!(first, second, "{cmd}");
    }
}

#[test]
fn inverse_embedding_matches_scalar_command() {
    let (_, ml, _) = run(&["solve-ml", "data/ml_hand.json"]);
    let (_, inv, _) = run(&["solve-inverse", "data/inverse_embedding.json"]);
    let ml: serde_json::Value = serde_json::from_str(&ml).unwrap();
    let inv: serde_json::Value = serde_json::from_str(&inv).unwrap();
    let a = json_field(&ml, &["solution", "pmf"]).as_array().unwrap();
    let b = json_field(&inv, &["solution", "pmf"]).as_array().unwrap();
    for (x, y) in a.iter().zip(b) {
        assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() <= 1e-9);
    }
    let la = json_field(&ml, &["solution", "lambda"])[0].as_f64().unwrap();
    assert!((la - 3f64.ln()).abs() < 1e-12);
}

#[test]
fn scalar_file_runs_through_solve_inverse() {
    let (code, out, _) = run(&["solve-inverse", "data/ml_hand.json", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("lambda: [1.09861228866810"), "{out}");
}

#[test]
fn stdin_input() {
    let (code, out, _) = run_in(
        &tests_dir(),
        &["solve-ml", "-", "--format", "text"],
        r#"{"u": [0, 1], "r": [0.5, 0.5]}"#,
    );
    assert_eq!(code, 0);
    assert!(out.contains("lambda: [0]"), "{out}");
}

#[test]
fn flags_override_file_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(&path, r#"{"u": [0, 1, 2], "r": [0.5, 0.3, 0.2], "config": {"tol_residual": 1e-3}}"#).unwrap();
    let (code, out, _) = run(&["solve-ml", path.to_str().unwrap(), "--tol", "1e-6", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("config.tol_residual,,9.9999999999999995e-7"), "{out}");
    let (code, _, err) = run(&["solve-ml", path.to_str().unwrap(), "--tol=-1"]);
    assert_eq!(code, 1);
    assert!(err.contains("tol_residual"), "{err}");
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"potential\": [0, 1],\n  \"frequencies\": [0.5, 0.7]\n}\n").unwrap();
    let (code, _, err) = run(&["solve-ml", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3"), "{err}");

    let (code, _, err) = run(&["solve-ml", "/nonexistent/problem.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/problem.json"), "{err}");

    let (code, _, _) = run(&["solve-ml"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["maxprob", "--n", "4", "--u", "0,1", "--c", "0.3", "--delta", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn maxprob_target_sources_agree() {
    let (_, by_lambda, _) = run(&["maxprob", "--n", "30", "--u", "0,1,2", "--lambda", "0"]);
    let (_, by_r, _) = run(&["maxprob", "--n", "30", "--u", "0,1,2", "--r", "0.2,0.3,0.5"]);
    let (_, by_c, _) = run(&["maxprob", "--n", "30", "--u", "0,1,2", "--c", "1"]);
    let a: serde_json::Value = serde_json::from_str(&by_lambda).unwrap();
    let c: serde_json::Value = serde_json::from_str(&by_c).unwrap();
    assert_eq!(a["type"], c["type"]);
    assert_eq!(a["type"], serde_json::json!([10, 10, 10]));
    let r: serde_json::Value = serde_json::from_str(&by_r).unwrap();
    assert!((r["c"].as_f64().unwrap() - 1.3).abs() < 1e-12);
    let (code, _, _) = run(&["maxprob", "--n", "30", "--u", "0,1,2", "--c", "1", "--lambda", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn check_reports_inverse_problem() {
    let (code, out, _) = run(&["check", "data/inverse_embedding.json", "--format", "text"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("scalar_embedding_linf"));
    let (code, out, _) = run(&["check", "data/inverse_identity.json", "--format", "text"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("status: skipped"));
}

#[test]
fn binary_exit_codes_and_stdin() {
    let bin = env!("CARGO_BIN_EXE_maxent");
    let data = tests_dir().join("data");
    for (file, code) in [("ml_hand.json", 0), ("ml_boundary.json", 2), ("inverse_identity.json", 1)] {
        let status = Command::new(bin)
            .args(["solve-ml", data.join(file).to_str().unwrap()])
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(code), "{file}");
    }
    let mut child = Command::new(bin)
        .args(["solve-inverse", "-", "--format", "text"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"X": [[0, 1]], "y": [1.2]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
