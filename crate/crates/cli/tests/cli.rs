use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racah-dist")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("one JSON document")
}

fn cells_match(j: &Value, c: &str) -> bool {
    match j {
        Value::Null => c.is_empty(),
        Value::Bool(b) => c == b.to_string(),
        Value::String(s) => c == s,
        Value::Number(n) => c.parse::<f64>().ok() == n.as_f64(),
        _ => false,
    }
}

#[test]
fn pmf_all_reports_agreement() {
    let doc = json(&["pmf", "--n", "4", "--m", "2", "--k", "2", "--l", "1", "--method", "all"]);
    assert_eq!(doc["summary"]["all_routes_agree"], Value::Bool(true));
    assert_eq!(doc["summary"]["pmf"], "1/3,1/2,1/6");
    let dens: Vec<&str> = doc["rows"].as_array().unwrap().iter().map(|r| r[2].as_str().unwrap()).collect();
    assert_eq!(dens, ["3", "2", "6"]);
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let cases: [&[&str]; 5] = [
        &["pmf", "--n", "20", "--m", "8", "--k", "9", "--l", "4"],
        &["cdf", "--n", "11", "--m", "5", "--k", "4", "--l", "2"],
        &["clt-check", "--xi", "0.4", "--kappa", "0.6", "--alpha", "0.3", "--n", "60"],
        &["plotdata", "--figure", "1"],
        &["pmf", "--n", "8", "--m", "3", "--k", "4", "--l", "2", "--method", "all"],
    ];
    for args in cases {
        let doc = json(args);
        let mut csv_args = vec!["--format", "csv"];
        csv_args.extend_from_slice(args);
        let out = run(&csv_args);
        assert!(out.status.success());
        let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
        let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        let columns: Vec<String> =
            doc["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
        assert_eq!(header, columns, "{args:?}");
        let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        let jrows = doc["rows"].as_array().unwrap();
        assert_eq!(rows.len(), jrows.len(), "{args:?}");
        for (c, j) in rows.iter().zip(jrows) {
            for (cc, jc) in c.iter().zip(j.as_array().unwrap()) {
                assert!(cells_match(jc, cc), "{args:?}: {cc:?} vs {jc}");
            }
        }
    }
}

#[test]
fn exact_and_float_fields_agree() {
    let doc = json(&["pmf", "--n", "30", "--m", "12", "--k", "14", "--l", "7"]);
    for row in doc["rows"].as_array().unwrap() {
        let num: f64 = row[1].as_str().unwrap().parse().unwrap();
        let den: f64 = row[2].as_str().unwrap().parse().unwrap();
        let float = row[3].as_f64().unwrap();
        assert!((num / den - float).abs() <= 1e-15 * float.abs().max(f64::MIN_POSITIVE));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["plotdata", "--figure", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["--format", "csv", "entropy", "--n", "12", "--m", "6", "--k", "4", "--l", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn runtime_only_with_timing() {
    let args = ["moments", "--n", "10", "--m", "4", "--k", "3", "--l", "1"];
    assert!(json(&args)["meta"].get("runtime_ms").is_none());
    let mut timed = vec!["--timing"];
    timed.extend_from_slice(&args);
    assert!(json(&timed)["meta"]["runtime_ms"].is_number());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--n-max", "5"]).status.code(), Some(0));
    let bad = run(&["pmf", "--n", "4", "--m", "2", "--k", "2", "--l", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("l <= m"));
    assert_eq!(run(&["pmf", "--n", "12", "--m", "6", "--k", "2", "--l", "1", "--method", "oracle"]).status.code(), Some(2));
    assert_eq!(run(&["qpmf", "--n", "6", "--m", "3", "--k", "2", "--l", "1", "--q", "-1/2"]).status.code(), Some(2));
    assert_eq!(run(&["plotdata", "--figure", "5"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let threads = Command::new(env!("CARGO_BIN_EXE_racah-dist"))
        .args(["cdf", "--n", "4", "--m", "2", "--k", "2", "--l", "1"])
        .env("RACAH_DIST_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn q_one_matches_classical() {
    let classical = json(&["pmf", "--n", "8", "--m", "3", "--k", "4", "--l", "2"]);
    let q = json(&["pmf", "--n", "8", "--m", "3", "--k", "4", "--l", "2", "--q", "1"]);
    assert_eq!(classical["rows"], q["rows"]);
}

#[test]
fn figure_four_parameters() {
    let doc = json(&["plotdata", "--figure", "4"]);
    assert!((doc["summary"]["mu"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert!((doc["summary"]["sigma"].as_f64().unwrap() - 0.3354).abs() < 1e-4);
}
