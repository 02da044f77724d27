//! End-to-end checks of the `contagion` binary: exit codes, artifact layout,
//! determinism across reruns and thread counts, config-file precedence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contagion"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("contagion-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "contagion {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    entries.sort();
    entries
}

fn synth_graph(dir: &Path, blocks: &str) -> PathBuf {
    run_ok(&[
        "synth",
        "--out",
        dir.to_str().unwrap(),
        "--blocks",
        blocks,
        "--p-in",
        "0.4",
        "--p-out",
        "0.05",
        "--rng-seed",
        "11",
    ]);
    dir.join("graph.json")
}

#[test]
fn synth_writes_cache_and_manifest() {
    let dir = workdir("synth");
    let graph = synth_graph(&dir, "10,10");
    assert!(graph.exists());
    let summary = read_json(&dir.join("synth-summary.json"));
    assert_eq!(summary["nodes"], 20);
    assert_eq!(summary["follow_reciprocity"], 1.0);
    let manifest = read_json(&dir.join("run-manifest.json"));
    assert_eq!(manifest["subcommand"], "synth");
    assert_eq!(manifest["parameters"]["rng_seed"], 11);
    assert!(manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v == "graph.json"));
}

#[test]
fn simulate_reruns_are_byte_identical() {
    let base = workdir("sim-determinism");
    let graph = synth_graph(&base.join("g"), "10,10");
    let sim = |out: &Path, threads: &str| {
        run_ok(&[
            "simulate",
            "--out",
            out.to_str().unwrap(),
            "--graph",
            graph.to_str().unwrap(),
            "--gamma",
            "0.6",
            "--alpha",
            "-0.5",
            "--runs",
            "3",
            "--rng-seed",
            "7",
            "--snapshot-k",
            "5",
            "--threads",
            threads,
        ]);
    };
    // The exact same invocation twice gives byte-identical artifacts,
    // including the manifest.
    sim(&base.join("a"), "2");
    let first = dir_contents(&base.join("a"));
    fs::remove_dir_all(base.join("a")).unwrap();
    sim(&base.join("a"), "2");
    assert_eq!(first, dir_contents(&base.join("a")), "reruns differ");

    // Thread count must not leak into any artifact except the manifest echo
    // of the invocation itself.
    sim(&base.join("c"), "1");
    let strip_manifest = |mut v: Vec<(String, Vec<u8>)>| {
        v.retain(|(name, _)| name != "run-manifest.json");
        v
    };
    assert_eq!(
        strip_manifest(first),
        strip_manifest(dir_contents(&base.join("c"))),
        "thread count changed outputs"
    );
    assert!(base.join("a/trace-000.json").exists());
    assert!(base.join("a/snapshot-002.dot").exists());
    assert!(base.join("a/aggregate.csv").exists());
}

#[test]
fn missing_input_exits_one_naming_path() {
    let dir = workdir("missing");
    let out = bin()
        .args([
            "simulate",
            "--out",
            dir.to_str().unwrap(),
            "--graph",
            "no-such-graph.tsv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("no-such-graph.tsv"), "stderr: {stderr}");
}

#[test]
fn unknown_flag_exits_two() {
    let out = bin().args(["simulate", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_emits_one_row_per_grid_cell() {
    let dir = workdir("sweep");
    let graph = synth_graph(&dir.join("g"), "10,10");
    let out = dir.join("s");
    run_ok(&[
        "sweep",
        "--out",
        out.to_str().unwrap(),
        "--graph",
        graph.to_str().unwrap(),
        "--gammas",
        "0.4,0.8",
        "--alphas",
        "-1:1:0.5",
        "--runs",
        "4",
        "--rng-seed",
        "3",
    ]);
    for gamma in ["0.4", "0.8"] {
        let csv = fs::read_to_string(out.join(format!("sweep-gamma-{gamma}.csv"))).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 1 + 5, "header plus one row per alpha");
        assert_eq!(
            rows[0],
            "alpha,mean_slope,slope_sd,mean_coverage,coverage_sd,runs,no_burst_excluded"
        );
    }
    let sweep = read_json(&out.join("sweep.json"));
    assert_eq!(sweep["cells"].as_array().unwrap().len(), 10);
}

#[test]
fn config_file_supplies_defaults_flags_win() {
    let dir = workdir("config");
    let graph = synth_graph(&dir.join("g"), "8,8");
    let config = dir.join("config.json");
    fs::write(&config, r#"{"gamma": 0.0, "runs": 2, "rng_seed": 5}"#).unwrap();

    let from_config = dir.join("from-config");
    run_ok(&[
        "simulate",
        "--out",
        from_config.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--graph",
        graph.to_str().unwrap(),
    ]);
    let manifest = read_json(&from_config.join("run-manifest.json"));
    assert_eq!(manifest["parameters"]["gamma"], 0.0);
    assert_eq!(manifest["parameters"]["runs"], 2);
    // gamma = 0 keeps every trace at the seed alone.
    let trace = read_json(&from_config.join("trace-001.json"));
    assert_eq!(trace["records"].as_array().unwrap().len(), 1);

    let flag_wins = dir.join("flag-wins");
    run_ok(&[
        "simulate",
        "--out",
        flag_wins.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--graph",
        graph.to_str().unwrap(),
        "--gamma",
        "0.9",
    ]);
    let manifest = read_json(&flag_wins.join("run-manifest.json"));
    assert_eq!(manifest["parameters"]["gamma"], 0.9);
    assert_eq!(manifest["parameters"]["runs"], 2);
}

#[test]
fn burst_markers_match_documented_fixture() {
    let dir = workdir("burst");
    // Hourly counts 1,1,1,2,8,15,20,15,8,3,1,1 of the sigmoid fixture:
    // awakening at hour 3 (y 5), peak at hour 8 (y 71), slope 13.2.
    let counts = [1u64, 1, 1, 2, 8, 15, 20, 15, 8, 3, 1, 1];
    let mut lines = String::new();
    for (hour, &count) in counts.iter().enumerate() {
        for k in 0..count {
            lines.push_str(&format!("{}\n", hour as u64 * 3600 + k));
        }
    }
    let input = dir.join("timestamps.csv");
    fs::write(&input, lines).unwrap();
    let out = dir.join("b");
    run_ok(&[
        "burst",
        "--out",
        out.to_str().unwrap(),
        "--timestamps",
        input.to_str().unwrap(),
        "--bin-width",
        "3600",
    ]);
    let markers = read_json(&out.join("markers.json"));
    assert_eq!(markers["x_awakening"], 3.0);
    assert_eq!(markers["y_awakening"], 5.0);
    assert_eq!(markers["x_peak"], 8.0);
    assert_eq!(markers["y_peak"], 71.0);
    assert!((markers["slope"].as_f64().unwrap() - 13.2).abs() < 1e-12);
    let curve = fs::read_to_string(out.join("curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1 + 12);

    // A linear stream has no burst; the outcome is still exit 0.
    let flat = dir.join("flat.csv");
    fs::write(&flat, (0..8).map(|h| format!("{}\n", h * 3600)).collect::<String>()).unwrap();
    let out2 = dir.join("flat-out");
    run_ok(&[
        "burst",
        "--out",
        out2.to_str().unwrap(),
        "--timestamps",
        flat.to_str().unwrap(),
    ]);
    let markers = read_json(&out2.join("markers.json"));
    assert!(markers["no_burst"].is_string());
}

#[test]
fn stats_welch_fixture() {
    let dir = workdir("stats");
    fs::write(dir.join("a.csv"), "1\n2\n3\n4\n5\n").unwrap();
    fs::write(dir.join("b.csv"), "2\n3\n4\n5\n6\n").unwrap();
    let out = dir.join("s");
    run_ok(&[
        "stats",
        "--out",
        out.to_str().unwrap(),
        "--a",
        dir.join("a.csv").to_str().unwrap(),
        "--b",
        dir.join("b.csv").to_str().unwrap(),
    ]);
    let stats = read_json(&out.join("stats.json"));
    assert!((stats["welch"]["t"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!((stats["welch"]["df"].as_f64().unwrap() - 8.0).abs() < 1e-12);
    assert!((stats["welch"]["p_two_sided"].as_f64().unwrap() - 0.3465935).abs() < 1e-5);
    // Samples lie outside [0, 1]: divergences skipped with a note.
    assert!(stats["kl"].is_null());
    assert!(!stats["notes"].as_array().unwrap().is_empty());
}

#[test]
fn ingest_tie_strength_and_events_pipeline() {
    let dir = workdir("pipeline");
    fs::write(
        dir.join("edges.tsv"),
        "# follower\tfollowee\na\tb\nb\ta\nb\tc\nc\ta\na\ta\n",
    )
    .unwrap();
    fs::write(
        dir.join("log.csv"),
        "10,a,b,anger\n20,b,a,joy\n30,c,a,anger\n40,a,b,joy\n50,b,c,none\n",
    )
    .unwrap();

    let ingest_out = dir.join("ingest");
    run_ok(&[
        "ingest",
        "--out",
        ingest_out.to_str().unwrap(),
        "--edges",
        dir.join("edges.tsv").to_str().unwrap(),
        "--log",
        dir.join("log.csv").to_str().unwrap(),
        "--dot-nodes",
        "a,b,c",
    ]);
    let dot = fs::read_to_string(ingest_out.join("subset.dot")).unwrap();
    assert!(dot.contains("\"a\" -- \"b\";"));
    let summary = read_json(&ingest_out.join("ingest-summary.json"));
    assert_eq!(summary["nodes"], 3);
    assert_eq!(summary["rejected_self_loops"], 1);
    assert_eq!(summary["log_records"], 5);
    // a<->b reciprocal out of 3 undirected edges.
    assert!((summary["follow_reciprocity"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);

    let ties_out = dir.join("ties");
    run_ok(&[
        "tie-strength",
        "--out",
        ties_out.to_str().unwrap(),
        "--graph",
        ingest_out.join("graph.json").to_str().unwrap(),
        "--log",
        dir.join("log.csv").to_str().unwrap(),
        "--metric",
        "reciprocity",
    ]);
    let ties = fs::read_to_string(ties_out.join("ties.csv")).unwrap();
    assert_eq!(ties.lines().count(), 1 + 3, "header plus one row per edge");
    assert!(ties.starts_with("u,v,raw,normalized\n"));
    let tie_summary = read_json(&ties_out.join("tie-summary.json"));
    assert!(tie_summary["welch"].is_object());

    fs::write(
        dir.join("events.csv"),
        "event_id,timestamp,emotion\n\
         e1,0,anger\ne1,3600,anger\ne1,7200,anger\ne1,7300,anger\ne1,7400,anger\n\
         e1,10800,anger\ne1,10900,anger\ne1,11000,joy\ne1,14400,anger\n\
         e2,0,none\ne2,3600,none\n",
    )
    .unwrap();
    let events_out = dir.join("events");
    run_ok(&[
        "events",
        "--out",
        events_out.to_str().unwrap(),
        "--input",
        dir.join("events.csv").to_str().unwrap(),
    ]);
    let analyses = read_json(&events_out.join("events.json"));
    assert_eq!(analyses.as_array().unwrap().len(), 2);
    assert_eq!(analyses[0]["dominant"], "anger");
    assert_eq!(analyses[1]["dominant"], serde_json::Value::Null);
    assert!(events_out.join("event-summary.csv").exists());
}

#[test]
fn fit_emits_curves_and_argmin() {
    let dir = workdir("fit");
    let graph = synth_graph(&dir.join("g"), "15,15");
    fs::write(
        dir.join("empirical.csv"),
        (0..40)
            .map(|k| format!("{}\n", 0.2 + 0.01 * (k % 10) as f64))
            .collect::<String>(),
    )
    .unwrap();
    let out = dir.join("f");
    run_ok(&[
        "fit",
        "--out",
        out.to_str().unwrap(),
        "--graph",
        graph.to_str().unwrap(),
        "--empirical",
        dir.join("empirical.csv").to_str().unwrap(),
        "--alphas",
        "-0.5,0,0.5",
        "--runs",
        "3",
        "--rng-seed",
        "2",
    ]);
    for kind in ["kl", "wasserstein"] {
        let csv = fs::read_to_string(out.join(format!("fit-{kind}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 1 + 3);
        assert!(csv.starts_with("alpha,divergence\n"));
    }
    let fit = read_json(&out.join("fit.json"));
    let argmin = fit["kl"]["argmin_alpha"].as_f64().unwrap();
    assert!([-0.5, 0.0, 0.5].contains(&argmin));
}
