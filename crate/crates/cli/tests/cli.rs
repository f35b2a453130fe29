use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qbayes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbayes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn smoking_text_and_json_agree() {
    let text = qbayes(&["demo-smoking"]);
    assert_eq!(text.status.code(), Some(0));
    let t = stdout(&text);
    assert!(t.contains("0.46|t> + 0.54|f>"));
    assert!(t.contains("0.155|t> + 0.845|f>"));
    assert!(t.contains("0.114|t,t,t> + 0.171|t,t,f>"));

    let j = json(&qbayes(&["demo-smoking", "--json"]));
    let post = j["crossover"]["probs"][0].as_f64().unwrap();
    assert_eq!(format!("{post:.3}"), "0.267");
    assert_eq!(j["paths_agree"], true);
    assert_eq!(j["joint"]["probs"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_exit_codes() {
    let ok = qbayes(&[
        "verify",
        "--suite",
        "inference",
        "--trials",
        "5",
        "--seed",
        "7",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("PASS"));

    let fail = qbayes(&[
        "verify",
        "--suite",
        "inference",
        "--trials",
        "5",
        "--tol",
        "0",
    ]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stderr(&fail).contains("forward inference"));

    for bad in [
        vec!["verify", "--trials", "0"],
        vec!["verify", "--suite", "nope"],
        vec!["verify", "--dims", "3"],
        vec!["verify", "--dims", "0,2"],
        vec!["verify", "--tol", "-1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(qbayes(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn verify_json_is_reproducible() {
    let args = [
        "verify",
        "--suite",
        "pair-extract",
        "--trials",
        "6",
        "--dims",
        "2,3",
        "--json",
    ];
    let a = qbayes(&args);
    let b = qbayes(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["suite"], "pair-extract");
    assert_eq!(v["seed"], 2024);
    assert_eq!(v["trials"], 6);
    assert_eq!(v["dims"], serde_json::json!([2, 3]));
    assert_eq!(v["equations"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_text_matches_json() {
    let base = [
        "verify",
        "--suite",
        "quantum-duality",
        "--trials",
        "4",
        "--seed",
        "3",
    ];
    let text = stdout(&qbayes(&base));
    let mut with_json = base.to_vec();
    with_json.push("--json");
    let v = json(&qbayes(&with_json));
    for e in v["equations"].as_array().unwrap() {
        let shown = format!("{:.3e}", e["max_dev"].as_f64().unwrap());
        assert!(text.contains(&shown), "{shown} missing from\n{text}");
    }
}

#[test]
fn all_suites_by_default() {
    let o = qbayes(&["verify", "--trials", "3", "--dims", "2,2", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o).as_array().unwrap().len(), 8);
}

#[test]
fn witness_command() {
    let o = qbayes(&["witness"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Frobenius distance 1"));
    let v = json(&qbayes(&["witness", "--json"]));
    assert!((v["distance"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn inspect_round_trips_written_files() {
    let path = scratch("smoking.json");
    let o = qbayes(&["demo-smoking", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();

    let joint = scratch("joint.json");
    std::fs::write(&joint, written["joint"].to_string()).unwrap();
    let o = qbayes(&["inspect", "--file", joint.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("distribution"));

    let w = scratch("witness.json");
    qbayes(&["witness", "--file", w.to_str().unwrap()]);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    for (key, kind) in [("sigma", "quantum state"), ("p", "effect")] {
        let f = scratch(&format!("{key}.json"));
        std::fs::write(&f, written[key].to_string()).unwrap();
        let o = qbayes(&["inspect", "--file", f.to_str().unwrap()]);
        assert!(stdout(&o).starts_with(kind), "{key}: {}", stdout(&o));
    }

    let report = scratch("report.json");
    qbayes(&[
        "verify",
        "--suite",
        "witnesses",
        "--trials",
        "2",
        "--file",
        report.to_str().unwrap(),
    ]);
    let o = qbayes(&["inspect", "--file", report.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("trial report"));
}

#[test]
fn inspect_rejects_bad_input() {
    let missing = qbayes(&["inspect", "--file", "/nonexistent/x.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let f = scratch("bad-state.json");
    std::fs::write(
        &f,
        r#"{"rows":2,"cols":2,"re":[[0.5,0.0],[0.0,0.6]],"im":[[0,0],[0,0]],"dims":[2],"kind":"state"}"#,
    )
    .unwrap();
    let o = qbayes(&["inspect", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trace"));

    let f = scratch("unknown.json");
    std::fs::write(&f, r#"{"x": 1}"#).unwrap();
    assert_eq!(
        qbayes(&["inspect", "--file", f.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
