//! CLI contract tests: exit codes, output formats, flag validation.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperchroma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["thresholds", "--bogus-flag"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    // Empty/invalid ranges.
    assert_eq!(
        run(&["thresholds", "--r-range", "5..3", "--k-range", "2..2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["thresholds", "--r-range", "2..65", "--k-range", "2..2"]).status.code(),
        Some(2)
    );
    // k does not divide n.
    assert_eq!(
        run(&["moments", "--n", "5", "--r", "2", "--k", "2", "--m", "1"]).status.code(),
        Some(2)
    );
    // Decreasing density grid.
    assert_eq!(
        run(&[
            "sweep", "--r", "3", "--k", "2", "--n", "12", "--c-grid", "2,1", "--trials", "5",
            "--seed", "1"
        ])
        .status
        .code(),
        Some(2)
    );
    // Model/flag mismatches.
    assert_eq!(
        run(&["sample", "--n", "5", "--r", "2", "--model", "multi", "--seed", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["sample", "--n", "5", "--r", "2", "--model", "bernoulli", "--m", "3", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
    // Unknown lemma id.
    assert_eq!(run(&["verify", "--lemma", "app:lem042"]).status.code(), Some(2));
}

#[test]
fn guard_violations_exit_3() {
    // Vertex guard for exact sweeps.
    assert_eq!(
        run(&[
            "sweep", "--r", "3", "--k", "2", "--n", "100", "--c-grid", "1", "--trials", "5",
            "--seed", "1"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn moments_worked_example() {
    let out = run(&["moments", "--n", "4", "--r", "2", "--k", "2", "--m", "1", "--exact-z2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("E_Z=3\n"), "{text}");
    assert!(text.contains("E_Z2=12\n"), "{text}");
    let out = run(&["moments", "--n", "4", "--r", "2", "--k", "2", "--m", "0"]);
    assert!(stdout(&out).contains("E_Z=6\n"));
}

#[test]
fn sample_output_format() {
    let out = run(&[
        "sample", "--n", "5", "--r", "3", "--m", "2", "--model", "multi", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# n=5 r=3 m=2 model=multi seed=7 stream=0"), "{header}");
    let edges: Vec<&str> = lines.collect();
    assert_eq!(edges.len(), 2);
    for edge in edges {
        let labels: Vec<u32> = edge.split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(labels.len(), 3);
        assert!(labels.iter().all(|&v| (1..=5).contains(&v)));
    }
}

#[test]
fn thresholds_json_round_trips() {
    let out = run(&["thresholds", "--r-range", "3..3", "--k-range", "3..3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row["r"], 3);
    assert_eq!(row["k"], 3);
    assert_eq!(row["classification"], "Irregular");
    let c = row["c_rk"].as_f64().unwrap();
    assert!((c - 8.1566).abs() < 5e-5);
    assert!(row["c_min"].as_f64().unwrap() <= c);
}

#[test]
fn thresholds_csv_shape() {
    let out = run(&["thresholds", "--r-range", "3..5", "--k-range", "3..3"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,k,u_low,c_rk,u_high,classification");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "3");
    assert_eq!(row[1], "3");
    assert!((row[2].parse::<f64>().unwrap() - 2.7726).abs() < 5e-5);
    assert!((row[3].parse::<f64>().unwrap() - 8.1566).abs() < 5e-5);
    assert!((row[4].parse::<f64>().unwrap() - 9.8875).abs() < 5e-5);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn verify_single_check_and_csv() {
    let out = run(&["verify", "--lemma", "app:lem017", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("lemma_id,domain,grid_size,worst_margin,passed\n"));
    assert!(text.contains("app:lem017"));
    assert!(text.trim_end().ends_with("true"));
}

#[test]
fn sweep_csv_schema_and_sidecar() {
    let meta = std::env::temp_dir().join("hyperchroma_sweep_meta_test.json");
    let meta_str = meta.to_str().unwrap().to_owned();
    let out = run(&[
        "sweep", "--r", "3", "--k", "2", "--n", "14", "--c-grid", "0.5,1.5", "--trials", "20",
        "--model", "multi", "--seed", "2", "--meta", &meta_str,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "r,k,n,model,c,m,trials,colorable,p_hat,wilson_low,wilson_high,censored"
    );
    assert_eq!(text.lines().count(), 3);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "multi");
    assert_eq!(row[5], "7"); // m = floor(0.5 * 14)
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(sidecar["config"]["seed"]["value"], 2);
    assert!(sidecar["wall_ms"].is_number());
    let _ = std::fs::remove_file(&meta);
}

#[test]
fn badedges_json_output() {
    let out = run(&["badedges", "--r", "2", "--c", "1.0", "--n", "200", "--trials", "100", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["n"], 200);
    assert!(value["p_no_bad"].as_f64().unwrap() <= 1.0);
    assert!((value["p_no_bad_asymptotic"].as_f64().unwrap() - (-2.0f64).exp()).abs() < 1e-12);
}
