mod common;

use std::process::Command;

use common::{examples_dir, golden_suite, run_cli};

fn s(x: &str) -> String {
    x.to_string()
}

#[test]
fn golden_reports() {
    let dir = examples_dir().join("reports");
    let update = std::env::var_os("TOROIDAL_UPDATE_GOLDEN").is_some();
    for (name, args) in golden_suite() {
        let out = run_cli(&args, 2);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        let path = dir.join(&name);
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden report {name}"));
        assert_eq!(out.stdout, expected, "report {name} changed");
    }
}

#[test]
fn emitted_charts_match_golden_outputs() {
    let ex = examples_dir();
    let tmp = std::env::temp_dir().join(format!("toroidal-emit-{}", std::process::id()));
    let chart = ex.join("root_plane.chart").to_string_lossy().into_owned();
    let out = run_cli(&[s("kummer-blowup"), chart.clone(), s("--ideal=t;pi^(1/2)"), format!("--emit={}", tmp.display())], 1);
    assert_eq!(out.code, 0);
    for (emitted, golden) in [("m1.chart", "root_plane_m1.chart"), ("t1.chart", "root_plane_t1.chart")] {
        let a = std::fs::read_to_string(tmp.join(emitted)).unwrap();
        let b = std::fs::read_to_string(ex.join("output").join(golden)).unwrap();
        assert_eq!(a, b);
    }
    let out = run_cli(&[s("coarse-blowup"), chart, s("--ideal=t;pi^(1/2)"), format!("--emit={}", tmp.join("c").display())], 1);
    assert_eq!(out.code, 0);
    for (emitted, golden) in [("m1.chart", "root_plane_coarse_m1.chart"), ("m2.chart", "root_plane_coarse_m2.chart")] {
        let a = std::fs::read_to_string(tmp.join("c").join(emitted)).unwrap();
        let b = std::fs::read_to_string(ex.join("output").join(golden)).unwrap();
        assert_eq!(a, b);
    }
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn documented_examples() {
    let ex = examples_dir();
    let root = ex.join("index_three.chart").to_string_lossy().into_owned();
    let out = run_cli(&[s("root-ideal"), root, s("--ideal=(3,3)"), s("--d=3")], 1);
    assert!(out.stdout.contains("generators: [[1, 2], [2, 1]]"));
    assert!(out.stdout.contains("principal: false"));
    let o2 = ex.join("root_plane.chart").to_string_lossy().into_owned();
    let out = run_cli(&[s("kummer-blowup"), o2, s("--ideal=t;pi^(1/2)"), s("--format=json")], 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["schema"], "toroidal-report");
    assert_eq!(v["version"], 1);
    let charts = v["result"]["charts"].as_array().unwrap();
    assert_eq!(charts.len(), 2);
    let m = charts.iter().find(|c| c["kind"] == "m").unwrap();
    assert_eq!(m["residual_order"], 2);
    assert_eq!(m["chart"]["group"], serde_json::json!([2]));
}

#[test]
fn exit_codes() {
    let ex = examples_dir();
    let p = |f: &str| ex.join(f).to_string_lossy().into_owned();
    // schema problems
    assert_eq!(run_cli(&[s("saturate"), s("/nonexistent.chart")], 1).code, 2);
    assert_eq!(run_cli(&[s("frobnicate")], 1).code, 2);
    assert_eq!(run_cli(&[s("root-ideal"), p("index_three.chart"), s("--ideal=(1,0)"), s("--d=2")], 1).code, 2);
    assert_eq!(run_cli(&[s("root-ideal"), p("index_three.chart"), s("--ideal=(1,0,0)"), s("--d=2")], 1).code, 2);
    // domain problems
    let out = run_cli(&[s("coarse-blowup"), p("root_plane.chart"), s("--ideal=t;pi^(1/2)"), s("--e=3")], 1);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("DenominatorMismatch"));
    let out = run_cli(&[s("kummer-blowup"), p("half_turn.chart"), s("--ideal=x^(1/2)"), s("--format=json")], 1);
    assert_eq!(out.code, 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["name"], "UnsupportedAction");
    assert_eq!(v["error"]["code"], 19);
    assert_eq!(run_cli(&[s("--help")], 1).code, 0);
}

#[test]
fn binary_reads_thread_variable() {
    let ex = examples_dir();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_toroidal"))
            .env("TOROIDAL_THREADS", threads)
            .args(["kummer-blowup", ex.join("root_plane.chart").to_str().unwrap(), "--ideal=t;pi^(1/2)"])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("8");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_toroidal")).args(["saturate", "/nonexistent.chart"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
