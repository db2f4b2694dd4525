use std::path::Path;
use std::process::{Command, Output};

use statrs::function::gamma::gamma;

fn fracjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracjet")).args(args).output().unwrap()
}

fn rows(csv_text: &str) -> Vec<Vec<f64>> {
    csv_text
        .lines()
        .skip(1)
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn deriv_of_square_follows_power_rule() {
    let out = stdout(&fracjet(&[
        "deriv", "--alpha", "0.5", "--fn", "pow", "--gamma", "2", "--grid", "0:1:1025",
    ]));
    let table = rows(&out);
    assert_eq!(table.len(), 1025);
    let c = gamma(3.0) / gamma(2.5);
    for row in table.iter().filter(|r| r[0] >= 0.1) {
        let exact = c * row[0].powf(1.5);
        assert!(
            (row[1] - exact).abs() <= 1e-2 * exact,
            "t = {}: {} vs {exact}",
            row[0],
            row[1]
        );
    }
}

#[test]
fn mlf_at_alpha_one_is_exponential() {
    let out = stdout(&fracjet(&["mlf", "--alpha", "1", "--z", "2"]));
    let table = rows(&out);
    assert_eq!(table.len(), 1);
    assert!((table[0][1] - 2f64.exp()).abs() <= 1e-10);
}

#[test]
fn short_grid_is_a_usage_error() {
    let out = fracjet(&["deriv", "--alpha", "1.5", "--grid", "0:1:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn invalid_inputs_exit_with_two() {
    for args in [
        &["mlf", "--alpha", "0.5"][..],
        &["deriv", "--alpha", "-1"],
        &["solve", "--model", "nonexistent"],
        &["lift", "--alpha", "1.2"],
        &["deriv", "--alpha", "0.5", "--grid", "1:0:100"],
        &["solve", "--model", "phillips", "--forcing", "wobble"],
    ] {
        let out = fracjet(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_with_three() {
    // E_0.2(40) needs far more terms than the series budget allows
    let out = fracjet(&["mlf", "--alpha", "0.2", "--z", "40"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"alpha": 0.5, "fn": "const", "value": 3.0, "grid": "0:1:65"}"#,
    )
    .unwrap();
    let cfg = config.to_str().unwrap();
    let from_config = rows(&stdout(&fracjet(&["deriv", "--config", cfg])));
    assert_eq!(from_config.len(), 65);
    assert!(from_config.iter().all(|r| r[1] == 0.0));

    let overridden = rows(&stdout(&fracjet(&[
        "deriv", "--config", cfg, "--fn", "pow", "--gamma", "1",
    ])));
    let c = 1.0 / gamma(1.5);
    let last = overridden.last().unwrap();
    assert!((last[1] - c).abs() <= 2e-2 * c, "{last:?}");

    std::fs::write(&config, r#"{"alpha": 0.5, "colour": "red"}"#).unwrap();
    assert_eq!(fracjet(&["deriv", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("lift.csv");
    let args = ["lift", "--alpha", "0.5", "--k", "2", "--fn", "sin", "--grid", "0:2:129"];
    let printed = fracjet(&args).stdout;
    let mut with_output = args.to_vec();
    with_output.extend(["--output", file.to_str().unwrap()]);
    let quiet = fracjet(&with_output);
    assert!(quiet.status.success());
    assert!(quiet.stdout.is_empty());
    assert_eq!(std::fs::read(&file).unwrap(), printed);
    let header = String::from_utf8(printed).unwrap();
    assert!(header.starts_with("t,x,y1,y2\n"));
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&fracjet(&all))).unwrap()
}

#[test]
fn json_output_carries_metadata() {
    let doc = json(&[
        "deriv", "--alpha", "0.25", "--fn", "exp", "--side", "right", "--grid", "0:1:33",
    ]);
    assert_eq!(doc["command"], "deriv");
    assert_eq!(doc["scheme"], "grunwald-letnikov");
    assert_eq!(doc["alpha"], 0.25);
    assert_eq!(doc["h"], 1.0 / 32.0);
    assert_eq!(doc["metadata"]["side"], "right");
    assert_eq!(doc["columns"], serde_json::json!(["t", "value"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 33);
    assert!(doc["version"].is_string());

    let solve = json(&["solve", "--model", "phillips", "--forcing", "sin", "--grid", "0:1:257"]);
    assert_eq!(solve["metadata"]["model"], "phillips");
    assert_eq!(solve["metadata"]["orders"], serde_json::json!([2.0, 1.0]));
    assert_eq!(solve["scheme"], "implicit-grunwald-letnikov");
}

#[test]
fn models_list_names_every_entry() {
    let text = stdout(&fracjet(&["models", "list"]));
    for name in [
        "friction",
        "phillips",
        "business-cycle",
        "bagley-torvik",
        "order3-potential",
        "power-law-example",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
    let doc = json(&["models", "list"]);
    assert_eq!(doc["models"].as_array().unwrap().len(), 4);
    assert_eq!(doc["lagrangians"].as_array().unwrap().len(), 5);
}

fn el_check_norm(solution: &Path) -> f64 {
    let doc = json(&[
        "el-check",
        "--lagrangian",
        "bagley-torvik",
        "--forcing",
        "bt-cubic",
        "--from-file",
        solution.to_str().unwrap(),
    ]);
    doc["metadata"]["norm_inf"].as_f64().unwrap()
}

#[test]
fn solve_then_el_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bt.csv");
    let out = fracjet(&[
        "solve",
        "--model",
        "bagley-torvik",
        "--forcing",
        "bt-cubic",
        "--grid",
        "0:1:2049",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let solution = rows(&std::fs::read_to_string(&file).unwrap());
    let last = solution.last().unwrap();
    assert!((last[1] - 1.0).abs() <= 1e-2, "x(1) = {}", last[1]);
    let norm = el_check_norm(&file);
    assert!(norm <= 1e-3, "residual norm {norm}");
}

#[test]
fn from_file_rejects_uneven_spacing_and_conflicting_flags() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("path.csv");
    let mut text = String::from("t,x\n");
    for j in 0..12 {
        let t = if j == 5 { 0.52 } else { j as f64 * 0.1 };
        text.push_str(&format!("{t},{}\n", t * t));
    }
    std::fs::write(&file, text).unwrap();
    let f = file.to_str().unwrap();
    assert_eq!(
        fracjet(&["deriv", "--alpha", "0.5", "--from-file", f]).status.code(),
        Some(2)
    );
    assert_eq!(
        fracjet(&["deriv", "--alpha", "0.5", "--from-file", f, "--fn", "sin"])
            .status
            .code(),
        Some(2)
    );
}
