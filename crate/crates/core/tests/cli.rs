use std::path::Path;
use std::process::{Command, Output};

use bttest::cli::io::{parse_sample, write_sample};
use bttest::model::GroupedSample;

fn bttest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bttest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_csv(path: &Path, g1: &[f64], g2: &[f64]) {
    let sample = GroupedSample::from_groups(g1, g2).unwrap();
    let mut out = Vec::new();
    write_sample(&mut out, &sample, &["control".into(), "treatment".into()]).unwrap();
    std::fs::write(path, out).unwrap();
}

fn example_csv(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("data.csv");
    write_csv(
        &path,
        &[5.1, 4.8, 5.6, 5.0, 4.7, 5.3, 5.2, 4.9],
        &[5.9, 6.1, 5.4, 6.3, 5.8, 6.0, 5.7, 6.2],
    );
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_writes_report_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let input = example_csv(dir.path());
    let (report, plot) = (dir.path().join("report.json"), dir.path().join("plot.csv"));
    let out = bttest(&[
        "analyze", "--input", s(&input), "--output", s(&report), "--plot-data", s(&plot),
        "--seed", "11", "--iters", "3000", "--burnin", "1000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // Group two is clearly larger, and the default direction is g2 - g1.
    assert!(json["delta_mpe"].as_f64().unwrap() > 1.0);
    assert_eq!(json["chain"]["seed"], 11);
    assert_eq!(json["groups"][0]["label"], "control");
    assert!(json["welch"]["p_value"].as_f64().unwrap() < 0.01);

    let plot = std::fs::read_to_string(&plot).unwrap();
    let mut lines = plot.lines();
    assert_eq!(lines.next(), Some("x,density"));
    assert_eq!(plot.lines().filter(|l| !l.starts_with('#')).count(), 513);
    assert!(plot.contains("# hpd_lower,"));
}

#[test]
fn commands_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = example_csv(dir.path());
    let runs: Vec<Vec<&str>> = vec![
        vec!["analyze", "--input", s(&input), "--iters", "2000", "--burnin", "500", "--seed", "5", "--strict-decision"],
        vec!["simulate", "--scenario", "small", "--n", "30", "--datasets", "4", "--iters", "1500", "--burnin", "500", "--seed", "5"],
        vec!["sensitivity", "--input", s(&input), "--iters", "2000", "--burnin", "500", "--seed", "5"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let files: Vec<_> = (0..2).map(|r| dir.path().join(format!("out-{i}-{r}.json"))).collect();
        for f in &files {
            let mut full = args.clone();
            full.extend(["--output", s(f)]);
            let out = bttest(&full);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        }
        assert_eq!(std::fs::read(&files[0]).unwrap(), std::fs::read(&files[1]).unwrap(), "{args:?}");
    }
}

#[test]
fn stdout_matches_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sim.json");
    let args = ["simulate", "--scenario", "null", "--n", "10", "--datasets", "1", "--iters", "500", "--burnin", "100", "--seed", "3"];
    let to_stdout = bttest(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", s(&file)]);
    assert!(bttest(&with_file).status.success());
    assert_eq!(to_stdout.stdout, std::fs::read(&file).unwrap());
    let json: serde_json::Value = serde_json::from_slice(&to_stdout.stdout).unwrap();
    assert_eq!(json["records"].as_array().unwrap().len(), 1);
}

#[test]
fn custom_scenario_and_prior() {
    let out = bttest(&[
        "simulate", "--scenario", "custom", "--mu1", "0", "--sd1", "1", "--mu2", "-1", "--sd2", "1",
        "--n", "20", "--datasets", "2", "--iters", "800", "--burnin", "200", "--seed", "9",
        "--b0", "-0.5", "--B0", "4", "--c0", "1", "--C0", "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((json["config"]["scenario"]["true_delta"].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn constant_groups_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.csv");
    write_csv(&input, &[2.0, 2.0, 2.0], &[2.0, 2.0]);
    let out = bttest(&["analyze", "--input", s(&input), "--seed", "1", "--iters", "100", "--burnin", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = example_csv(dir.path());
    let single = bttest(&["sensitivity", "--input", s(&input), "--presets", "wide", "--seed", "1"]);
    assert!(!single.status.success());
    assert!(String::from_utf8_lossy(&single.stderr).contains("two presets"));

    let unknown = bttest(&["simulate", "--scenario", "huge", "--n", "10", "--seed", "1"]);
    assert!(!unknown.status.success());

    let missing = bttest(&["analyze", "--input", s(&dir.path().join("nope.csv")), "--seed", "1"]);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.csv"));

    let no_seed = bttest(&["analyze", "--input", s(&input)]);
    assert!(!no_seed.status.success());

    let bad_burn = bttest(&["analyze", "--input", s(&input), "--seed", "1", "--iters", "10", "--burnin", "10"]);
    assert!(String::from_utf8_lossy(&bad_burn.stderr).contains("burn-in"));
}

#[test]
fn csv_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rt.csv");
    let g1 = [0.1, 1e-7, -3.25, 12345.678];
    let g2 = [std::f64::consts::PI, -0.0, 2.5];
    write_csv(&path, &g1, &g2);
    let back = parse_sample(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.sample, GroupedSample::from_groups(&g1, &g2).unwrap());
}
