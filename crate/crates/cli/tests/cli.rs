use std::path::PathBuf;
use std::process::{Command, Output};

use resolvent_core::toeplitz_norm::BoundReport;
use serde_json::Value;

fn resolvent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resolvent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("UTF-8 output")
}

fn json_of(args: &[&str]) -> Value {
    let out = resolvent(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("resolvent-cli-{}-{name}", std::process::id()))
}

fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

#[test]
fn bound_reference_values() {
    let v = json_of(&["bound", "--n", "2", "--r", "0.5", "--format", "json"]);
    assert!(close(num(&v["exact"]), 4.0, 1e-12));
    assert!(close(num(&v["asymptotic"]), 12.0 / std::f64::consts::PI, 1e-14));
    assert_eq!(num(&v["lower"]), 3.5);
    assert_eq!(num(&v["upper"]), 6.0);
    assert!(close(num(&v["davies_simon"]), 1.0 + 2f64.sqrt(), 1e-14));

    let v = json_of(&["bound", "--n", "1", "--r", "0.5", "--format", "json"]);
    assert!(close(num(&v["exact"]), 2.0, 1e-14));
    assert_eq!(num(&v["lower"]), 2.0);
    assert_eq!(num(&v["upper"]), 3.0);

    let v = json_of(&["bound", "--n", "1000", "--r", "0.5", "--format", "json"]);
    assert!((0.999..=1.001).contains(&num(&v["ratio"])));
}

#[test]
fn bound_human_output() {
    let out = resolvent(&["bound", "--n", "2", "--r", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.split_whitespace().eq(["exact", "4"])), "{text}");
    assert!(text.lines().any(|l| l.split_whitespace().eq(["lower", "3.5"])), "{text}");
}

#[test]
fn table_csv_layout_and_round_trip() {
    let out = resolvent(&["table", "--n", "1,2,3,5,8,13", "--r", "0.1,0.5,0.9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,r,exact,asymptotic,ratio,lower,upper,davies_simon"));

    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<BoundReport> = reader.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 18);
    for row in &rows {
        let fresh = BoundReport::compute(row.n, row.r).unwrap();
        let fields = |b: &BoundReport| {
            [b.r, b.exact, b.asymptotic, b.ratio, b.lower_fejer, b.upper_sum, b.davies_simon].map(sig15)
        };
        assert_eq!(fields(row), fields(&fresh));
        assert!(row.lower_fejer <= row.exact * (1.0 + 1e-9) && row.exact <= row.upper_sum * (1.0 + 1e-9));
    }
    for r in [0.1, 0.5, 0.9] {
        let column: Vec<f64> = rows.iter().filter(|b| b.r == r).map(|b| b.exact).collect();
        assert!(column.windows(2).all(|w| w[0] <= w[1]));
    }
    assert_eq!(rows[0].n, 1);
    assert!(close(rows[1].exact, 2.0, 1e-14));
}

#[test]
fn table_json_round_trip() {
    let out = resolvent(&["table", "--n", "1,4,40", "--r", "0.25,0.75", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<BoundReport> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row, BoundReport::compute(row.n, row.r).unwrap());
    }
}

#[test]
fn out_path_and_io_errors() {
    let path = temp_path("table.csv");
    let out = resolvent(&["table", "--n", "1", "--r", "0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written.lines().nth(1), Some("1,0.5,2,1.90985931710274,1.0471975511966,2,3,1"));

    let missing = temp_path("no-such-dir").join("table.csv");
    let out = resolvent(&["table", "--n", "1", "--r", "0.5", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["bound", "--n", "2"],
        vec!["bound", "--n", "2", "--r", "1.5"],
        vec!["bound", "--n", "0", "--r", "0.5"],
        vec!["bound", "--n", "two", "--r", "0.5"],
        vec!["table", "--n", "1,x", "--r", "0.5"],
        vec!["xnorm", "--n", "3", "--beta", "2.5"],
        vec!["verify", "extremal", "--n", "3", "--r", "0.5"],
        vec!["verify", "nonsense", "--n", "3", "--r", "0.5", "--seed", "1"],
        vec!["model", "--sigma", "0.5,1.2", "--zeta", "2"],
        vec!["model", "--sigma", "0.5,abc", "--zeta", "2"],
        vec!["model", "--sigma", "0.5", "--zeta", "2", "--format", "xml"],
        vec!["frobnicate"],
    ] {
        let out = resolvent(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(resolvent(&["--help"]).status.code(), Some(0));
}

#[test]
fn xnorm_reports_root() {
    let v = json_of(&["xnorm", "--n", "2", "--beta", "2", "--format", "json"]);
    assert!(close(num(&v["norm"]), 1.0 + 2f64.sqrt(), 1e-14));
    assert!(close(num(&v["theta"]), 0.75 * std::f64::consts::PI, 1e-15));
    let v = json_of(&["xnorm", "--n", "5", "--beta", "1", "--format", "json"]);
    let expected = 1.0 / (2.0 * (std::f64::consts::PI / 22.0).sin());
    assert!(close(num(&v["norm"]), expected, 1e-12));
    assert!(num(&v["residual"]).abs() < 1e-9);
    let v = json_of(&["xnorm", "--n", "5", "--beta", "0", "--format", "json"]);
    assert_eq!(num(&v["norm"]), 1.0);
    assert!(v["theta"].is_null());
}

fn entry(v: &Value, i: usize, j: usize) -> (f64, f64) {
    (num(&v[i][j][0]), num(&v[i][j][1]))
}

#[test]
fn model_examples() {
    let v = json_of(&["model", "--sigma", "0,0", "--zeta", "2", "--format", "json"]);
    let res = &v["resolvent"];
    assert_eq!(entry(res, 0, 0), (0.5, 0.0));
    assert_eq!(entry(res, 0, 1), (0.0, 0.0));
    assert_eq!(entry(res, 1, 0), (0.25, 0.0));
    assert_eq!(entry(res, 1, 1), (0.5, 0.0));
    assert!(num(&v["residual"]) <= 1e-14);

    let v = json_of(&["model", "--sigma", "0.5,0.5", "--zeta", "1", "--format", "json"]);
    let res = &v["resolvent"];
    assert!(close(entry(res, 0, 0).0, 2.0, 1e-14) && close(entry(res, 1, 1).0, 2.0, 1e-14));
    assert!(close(entry(res, 1, 0).0, 3.0, 1e-14));

    let v = json_of(&["model", "--sigma", "0.3+0.2i", "--zeta", "1", "--format", "json"]);
    let (re, im) = entry(&v["resolvent"], 0, 0);
    // 1/(0.7 − 0.2i) = (0.7 + 0.2i)/0.53
    assert!(close(re, 0.7 / 0.53, 1e-14) && close(im, 0.2 / 0.53, 1e-14));

    let v = json_of(&["model", "--sigma", "-0.5,0.2-0.1i", "--zeta", "-2", "--format", "json"]);
    assert_eq!(entry(&v["model_matrix"], 1, 1), (0.2, -0.1));
}

#[test]
fn model_csv_lists_entries() {
    let out = resolvent(&["model", "--sigma", "0,0", "--zeta", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("matrix,row,col,re,im"));
    assert!(text.lines().any(|l| l == "resolvent,1,0,0.25,0"));
    assert!(text.lines().any(|l| l.starts_with("residual,")));
}

#[test]
fn verify_reference_runs() {
    let v = json_of(&[
        "verify", "extremal", "--n", "8", "--r", "0.5", "--trials", "1000", "--seed", "42", "--format", "json",
    ]);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 1000 * 67);
    assert!(v["worst_case"].is_null());

    let v = json_of(&[
        "verify", "dominance", "--n", "6", "--r", "0.7", "--trials", "500", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(v["failed"], 0);

    let v = json_of(&[
        "verify", "boundary", "--n", "4", "--r", "0.5", "--trials", "20", "--seed", "3", "--format", "json",
    ]);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 21 * 32);
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--n", "3", "--r", "0.6", "--trials", "25", "--seed", "99", "--format", "csv"];
    let (a, b) = (resolvent(&args), resolvent(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let suites: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(suites, ["extremal", "dominance", "boundary"]);
}
