use std::process::{Command, Output};

use serde_json::Value;

fn brickwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brickwork"))
        .args(args)
        .env_remove("BRICKWORK_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = brickwork(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json document")
}

#[test]
fn hurwitz_small_cover() {
    let doc = json(&["hurwitz", "--profiles", "2;1,1;2"]);
    assert_eq!(doc["value"], "1/2");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["command"], "hurwitz");
}

#[test]
fn oracle_agrees_with_hurwitz() {
    let doc = json(&["oracle", "--kappa", "2", "--mu", "2", "--bricks", "2"]);
    assert_eq!(doc["value"], "1/2");
    assert_eq!(doc["raw_count"], 1);
    let general = json(&["oracle", "--profiles", "2;2;2;2"]);
    let frob = json(&["hurwitz", "--profiles", "2;2;2;2"]);
    assert_eq!(general["value"], frob["value"]);
}

#[test]
fn weingarten_values() {
    assert_eq!(json(&["wg", "--mu", "1", "--N", "5"])["value"], "1/5");
    // Wg(1,1) = 1/(N²-1), Wg(2) = -1/(N(N²-1)).
    assert_eq!(json(&["wg", "--mu", "1,1", "--N", "3"])["value"], "1/8");
    assert_eq!(json(&["wg", "--mu", "2", "--N", "3"])["value"], "-1/24");
    assert_eq!(json(&["uintegral", "--a", "1", "--b", "1", "--ap", "1", "--bp", "1", "--N", "4"])["value"], "1/4");
    assert_eq!(json(&["uintegral", "--a", "1", "--b", "2", "--ap", "1", "--bp", "1", "--N", "4"])["value"], "0");
}

#[test]
fn exit_codes() {
    let bad = brickwork(&["hurwitz", "--profiles", "2;x"]);
    assert_eq!(bad.status.code(), Some(2));
    let mismatch = brickwork(&["hurwitz", "--profiles", "2;1"]);
    assert_eq!(mismatch.status.code(), Some(2));
    let window = brickwork(&["series", "--N", "3", "--max-degree", "6"]);
    assert_eq!(window.status.code(), Some(3));
    let normal = brickwork(&["series", "--model", "normal", "--N", "4", "--n", "1", "--max-degree", "2"]);
    assert_eq!(normal.status.code(), Some(4));
    let doc: Value = serde_json::from_slice(&normal.stdout).unwrap();
    assert_eq!(doc["calibration"]["1"]["proportional"], false);
}

#[test]
fn schur_exact_and_complex() {
    let doc = json(&["schur", "--lambda", "1,1", "--p", "1:3,2:3"]);
    assert_eq!(doc["value"], "3");
    assert_eq!(doc["exact"], true);
    let doc = json(&["schur", "--lambda", "2", "--p", "1:0.5+1i,2:0"]);
    assert_eq!(doc["exact"], false);
    let v = doc["value"].as_array().unwrap();
    // s_2 = (p1² + p2)/2 = (-0.75 + i)/2.
    assert!((v[0].as_f64().unwrap() + 0.375).abs() < 1e-12);
    assert!((v[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn mc_is_reproducible_for_fixed_seed_and_workers() {
    let args =
        ["mc", "moment", "--n", "2", "--N", "3", "--mu", "2", "--samples", "3000", "--seed", "42", "--workers", "2"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a["mean"], b["mean"]);
    assert_eq!(a["std_error"], b["std_error"]);
    assert_eq!(a["exact_rational"], "1/3");
    assert_eq!(a["within_tolerance"], true);
}

#[test]
fn prop1_reads_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ab.json");
    let a = "[[[1,0],[0,0]],[[0,0],[2,1]]]";
    let b = "[[1,0],[1,1],[0,0],[0.5,-1]]";
    std::fs::write(&path, format!("{{\"A\": {a}, \"B\": {b}}}")).unwrap();
    let doc = json(&[
        "mc",
        "prop1",
        "--lambda",
        "1",
        "--N",
        "2",
        "--samples",
        "4000",
        "--seed",
        "7",
        "--workers",
        "1",
        "--matrix-file",
        path.to_str().unwrap(),
    ]);
    // s_1 = trace: (3+i)(1.5-i)/2.
    let exact = doc["exact"].as_array().unwrap();
    assert!((exact[0].as_f64().unwrap() - 2.75).abs() < 1e-9);
    assert!((exact[1].as_f64().unwrap() + 0.75).abs() < 1e-9);
    assert_eq!(doc["within_tolerance"], true);
}

#[test]
fn series_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let j = dir.path().join("s.json");
    let c = dir.path().join("s.csv");
    let out = brickwork(&[
        "series",
        "--N",
        "4",
        "--n",
        "1",
        "--max-degree",
        "4",
        "--repr",
        "all",
        "--json",
        j.to_str().unwrap(),
        "--csv",
        c.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(doc["calibration"]["hypothesis_holds"], false);
    let rows = doc["coefficients"].as_array().unwrap();
    // Every representation agrees on each μ.
    for mu in ["2", "1,1", "4", "3,1", "2,2", "2,1,1", "1,1,1,1"] {
        let vals: Vec<&Value> =
            rows.iter().filter(|r| r["mu"] == mu && r["kappa"].is_null()).map(|r| &r["value"]).collect();
        assert!(vals.len() >= 3, "{mu}");
        assert!(vals.windows(2).all(|w| w[0] == w[1]), "{mu}: {vals:?}");
    }
    let csv = std::fs::read_to_string(&c).unwrap();
    assert!(csv.starts_with("degree,mu,kappa,repr,value"));

    let labelled = json(&["series", "--N", "3", "--max-degree", "4", "--ignore-window"]);
    let outside = labelled["coefficients"].as_array().unwrap().iter().filter(|r| r["degree"] == 4).count();
    assert!(outside > 0);
    assert!(labelled["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["degree"] == 4)
        .all(|r| r["label"] == "outside validity window"));
}

#[test]
fn characters_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_brickwork"))
            .args(["characters", "--degree", "4"])
            .env("BRICKWORK_CACHE_DIR", dir.path())
            .output()
            .unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first["cache"], "miss");
    assert_eq!(second["cache"], "hit");
    assert_eq!(first["table"], second["table"]);
}

#[test]
fn verify_exit_status_and_json() {
    let out = brickwork(&["verify", "weingarten", "--samples", "2000"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    let doc = json(&["verify", "characters", "--format", "json"]);
    assert_eq!(doc["pass"], true);
    let unknown = brickwork(&["verify", "nonsense"]);
    assert_eq!(unknown.status.code(), Some(2));
}
