use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn incompat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incompat"))
        .args(args)
        .env_remove("INCOMPAT_MAX_SDP_DIM")
        .env_remove("INCOMPAT_MAX_CLASSES")
        .env_remove("INCOMPAT_THREADS")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = incompat(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn cycle_eta(n: usize) -> f64 {
    let n_f = n as f64;
    if n % 2 == 1 {
        (PI / (2.0 * n_f)).tan().recip() / n_f
    } else {
        2.0 / (n_f * (PI / n_f).sin())
    }
}

fn records(report: &Value) -> Vec<(String, String, f64)> {
    report["components"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["records"].as_array().unwrap().clone())
        .map(|r| {
            (
                r["method"].as_str().unwrap().to_string(),
                r["kind"].as_str().unwrap().to_string(),
                r["value"].as_f64().unwrap(),
            )
        })
        .collect()
}

fn find(recs: &[(String, String, f64)], method: &str, kind: &str) -> f64 {
    recs.iter()
        .find(|r| r.0 == method && r.1 == kind)
        .unwrap_or_else(|| panic!("no {kind} record from {method}"))
        .2
}

fn parse_csv(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut rows = vec![r.headers().unwrap().iter().map(String::from).collect()];
    rows.extend(
        r.records()
            .map(|x| x.unwrap().iter().map(String::from).collect()),
    );
    rows
}

#[test]
fn cycles_sweep_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycles.csv");
    let out = incompat(&[
        "sweep",
        "cycles",
        "--from",
        "3",
        "--to",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let got = parse_csv(&std::fs::read_to_string(&path).unwrap());
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/cycles_3_12.csv");
    let want = parse_csv(&std::fs::read_to_string(golden_path).unwrap());
    assert_eq!(got[0], want[0], "header changed");
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want).skip(1) {
        for (a, b) in g.iter().zip(w) {
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => assert!((x - y).abs() < 1e-8, "{a} vs {b}"),
                _ => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn cycles_sweep_values_follow_the_formula() {
    let out = incompat(&["sweep", "cycles", "--from", "3", "--to", "12"]);
    let rows = parse_csv(&String::from_utf8(out.stdout).unwrap());
    let col = |name: &str| rows[0].iter().position(|h| h == name).unwrap();
    let (n_col, eta_col, exact_col) = (col("n"), col("closed_form"), col("exact_sdp"));
    let mut odd = vec![];
    let mut even = vec![];
    for r in &rows[1..] {
        assert_eq!(r[col("schema")], "1");
        let n: usize = r[n_col].parse().unwrap();
        let eta: f64 = r[eta_col].parse().unwrap();
        assert!((eta - cycle_eta(n)).abs() < 1e-9, "C_{n}");
        // not requested, so empty rather than zero
        assert_eq!(r[exact_col], "");
        if n % 2 == 1 {
            odd.push(eta)
        } else {
            even.push(eta)
        }
    }
    // odd cycles approach 2/π from below, even ones from above
    assert!(odd.windows(2).all(|w| w[1] > w[0]));
    assert!(even.windows(2).all(|w| w[1] < w[0]));
    assert!(even.iter().all(|&e| e > 2.0 / PI));
    assert!(odd.iter().all(|&e| e < 2.0 / PI));
}

#[test]
fn gen_output_feeds_bounds() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "text"] {
        let path = dir.path().join(format!("q3.{format}"));
        let p = path.to_str().unwrap();
        let out = incompat(&[
            "gen",
            "--family",
            "hypercube",
            "--d",
            "3",
            "--format",
            format,
            "--out",
            p,
        ]);
        assert!(out.status.success());
        let before = std::fs::read(&path).unwrap();
        let report = ok_json(&["bounds", "--graph", p]);
        assert_eq!(std::fs::read(&path).unwrap(), before);
        assert_eq!(report["graph"]["n"], 8);
        assert_eq!(report["graph"]["m"], 12);
        assert_eq!(report["consistent"], true);
    }
}

#[test]
fn paw_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paw.txt");
    std::fs::write(&path, "4 4\n0 1\n0 2\n1 2\n2 3\n").unwrap();
    let report = ok_json(&["bounds", "--graph", path.to_str().unwrap()]);
    let recs = records(&report);
    assert!((find(&recs, "clique", "upper") - 3f64.powf(-0.5)).abs() < 1e-9);
    assert!((find(&recs, "lovasz", "upper") - 0.5f64.sqrt()).abs() < 1e-6);
}

#[test]
fn exact_path_three() {
    let v = ok_json(&["eta-exact", "--family", "path", "--n", "3"]);
    assert!((v["eta"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-4);
    assert_eq!(v["povm_valid"], true);
    assert_eq!(v["path_prediction"]["consistent"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        incompat(&["bounds", "--family", "cycle"]).status.code(),
        Some(2)
    );
    assert_eq!(incompat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        incompat(&["bounds", "--graph", "/nonexistent/graph.json"])
            .status
            .code(),
        Some(2)
    );
    let capped = incompat(&["eta-exact", "--family", "complete", "--n", "9"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(!capped.stderr.is_empty());
    let capped = incompat(&[
        "skew",
        "--family",
        "complete",
        "--n",
        "8",
        "--max-classes",
        "4",
    ]);
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn certify_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    std::fs::write(&path, "0 1 1 1\n-1 0 1 -1\n-1 -1 0 1\n-1 1 -1 0\n").unwrap();
    let v = ok_json(&["certify", "--matrix", path.to_str().unwrap()]);
    assert_eq!(v["certificate"]["skew_conference"], true);
    assert_eq!(v["certificate"]["weighing"], 3);
}

#[test]
fn paths_sweep_intervals() {
    let out = incompat(&["sweep", "paths", "--from", "2", "--to", "9"]);
    let rows = parse_csv(&String::from_utf8(out.stdout).unwrap());
    let col = |name: &str| rows[0].iter().position(|h| h == name).unwrap();
    for r in &rows[1..] {
        let f = |c: &str| r[col(c)].parse::<f64>().unwrap();
        assert!(f("interval_lower") <= f("upper") + 1e-9);
        assert!(f("fractional") <= f("interval_lower") + 1e-9);
        assert!(f("signing") <= f("interval_upper") + 1e-9);
    }
}
