use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str], config: &str) -> Output {
    let path = dir.join("job.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_hvir"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

#[test]
fn algebra_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["algebra-check"], r#"{"group":{"rank":2},"seed":7}"#);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["results"]["status"], "PASS");

    let flipped = run(
        dir.path(),
        &["algebra-check"],
        r#"{"group":{"rank":2},"seed":7,"convention":"XMinusY"}"#,
    );
    assert_eq!(flipped.status.code(), Some(1));
    let suites = report(&flipped)["results"]["suites"].clone();
    let failing: Vec<&str> = suites
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["failures"].as_u64() != Some(0))
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["module-axiom"]);
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["build"], r#"{"group":{"rank":2},"modul":{}}"#);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("modul"), "{err}");

    let out = run(
        dir.path(),
        &["build"],
        r#"{"group":{"rank":2},"module":{"family":"intermediate","alpha":"1/","beta":"0"}}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("module.alpha"));

    let out = run(
        dir.path(),
        &["probe"],
        r#"{"group":{"rank":1},"module":{"family":"trivial"},"probes":["nope"]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn intermediate_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["build", "--format", "csv"],
        r#"{"group":{"rank":1},"module":{"family":"intermediate","alpha":"0","beta":"0"},"window":{"box":6}}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("weight_key,level,dim_lower,dim_upper,status"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|r| r.ends_with(",0,1,1,exact")));
}

#[test]
fn induced_table_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(
        dir.path(),
        &["build", "--format", "csv", "--box", "0", "--out", out_dir.to_str().unwrap()],
        r#"{"group":{"rank":2},
            "module":{"family":"induced","alpha":"1/3","beta":"1/2","level_functional":[1,0]},
            "window":{"depth":2,"max_radius":3}}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("table.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let upper: Vec<&str> = rows.iter().map(|r| r[r.len() - 2]).collect();
    let lower: Vec<&str> = rows.iter().map(|r| r[r.len() - 3]).collect();
    assert_eq!(upper, ["1", "3", "15"]);
    assert_eq!(lower, ["1", "3", "9"]);
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["command"], "build");
    assert_eq!(rep["results"]["rows"], 3);
}

#[test]
fn verma_label_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["build", "--window-parts", "0,1;1,0;1,-1"],
        r#"{"group":{"rank":2},"module":{"family":"verma","cdot":"1","h":"h"},"window":{"length":3},"format":"csv"}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let counts: std::collections::BTreeMap<String, usize> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            assert_eq!(&r[4], "window-count");
            assert_eq!(&r[3], "");
            (r[0].to_string(), r[2].parse().unwrap())
        })
        .collect();
    // Multisets of size ≤ 3 from three parts.
    assert_eq!(counts.values().sum::<usize>(), 20);
    // (1,0) = (0,1) + (1,−1); (2,0): (1,0)², (1,0)(0,1)(1,−1) — the third
    // word (0,1)²(1,−1)² is longer than 3.
    assert_eq!(counts["h-(1,0)"], 2);
    assert_eq!(counts["h-(2,0)"], 2);
    assert_eq!(counts["h-(1,1)"], 2);
}

fn verdict(dir: &Path, module: &str) -> Value {
    let out = run(
        dir,
        &["classify"],
        &format!(r#"{{"group":{{"rank":2}},"module":{module}}}"#),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    report(&out)["results"]["verdict"].clone()
}

#[test]
fn classify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let v = verdict(dir.path(), r#"{"family":"intermediate","alpha":"1/3","beta":"2/5"}"#);
    assert_eq!(v["family"], "IntermediateSeries");
    assert_eq!(v["alpha"], "1/3");
    assert_eq!(v["beta"], "2/5");

    let v = verdict(
        dir.path(),
        r#"{"family":"induced","alpha":"1/3","beta":"1/2","level_functional":[1,0]}"#,
    );
    assert_eq!(v["family"], "Induced");
    assert_eq!(v["b"], serde_json::json!([1, 0]));
    assert_eq!(v["beta"], "1/2");

    let v = verdict(dir.path(), r#"{"family":"trivial"}"#);
    assert_eq!(v["family"], "Unknown");
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let job = r#"{"group":{"rank":2},
        "module":{"family":"induced","alpha":"1/3","beta":"1/2","level_functional":[1,0]},
        "probes":["support_shape","dichotomy"],"seed":3}"#;
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let a = strip(report(&run(dir.path(), &["probe"], job)));
    let b = strip(report(&run(dir.path(), &["probe"], job)));
    assert_eq!(a, b);
    assert_eq!(a["results"]["support_shape"]["kind"], "FullCoset");
}
