//! Subcommand implementations: input loading, parameter resolution
//! (flag > config file > built-in default), execution, artifact writing.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use contagion_core::calibrate::{self, FitParams, SweepParams};
use contagion_core::diffusion::{self, DiffusionConfig};
use contagion_core::events::{self, EventOptions};
use contagion_core::graph::{self, parse_timestamp, NodeId, NodeIdMap, SocialGraph};
use contagion_core::stats::{self, Distribution, DivergenceKind};
use contagion_core::tie::{self, Metric};
use contagion_core::{Emotion, RetweetLog};

use crate::output::{Csv, CsvField, OutputDir};
use crate::{
    BurstArgs, Cli, Command, EventsArgs, FitArgs, IngestArgs, SimulateArgs, StatsArgs, SweepArgs,
    SynthArgs, TieStrengthArgs,
};

pub fn run(cli: Cli) -> Result<()> {
    let config = ConfigFile::load(cli.config.as_deref())?;
    let out = OutputDir::create(&cli.out)?;
    let threads = cli.threads;
    match &cli.command {
        Command::Ingest(args) => ingest(args, &config, out, threads),
        Command::Synth(args) => synth(args, &config, out, threads),
        Command::TieStrength(args) => tie_strength(args, &config, out, threads),
        Command::Simulate(args) => simulate(args, &config, out, threads),
        Command::Burst(args) => burst_cmd(args, &config, out, threads),
        Command::Sweep(args) => sweep_cmd(args, &config, out, threads),
        Command::Fit(args) => fit_cmd(args, &config, out, threads),
        Command::Events(args) => events_cmd(args, &config, out, threads),
        Command::Stats(args) => stats_cmd(args, &config, out, threads),
    }
}

// ---------------------------------------------------------------------------
// Config file and parameter resolution
// ---------------------------------------------------------------------------

/// Flat JSON object mapping flag names to values, used as a defaults layer.
pub struct ConfigFile(serde_json::Map<String, serde_json::Value>);

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self(serde_json::Map::new()));
        };
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .with_context(|| format!("config file {} is not valid JSON", path.display()))?;
        match value {
            serde_json::Value::Object(map) => Ok(Self(map)),
            _ => bail!("config file {} must hold a JSON object", path.display()),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| anyhow!("config key {key:?} must be a number")),
        }
    }

    fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| anyhow!("config key {key:?} must be a non-negative integer")),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        Ok(self.u64(key)?.map(|v| v as usize))
    }

    fn i64(&self, key: &str) -> Result<Option<i64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_i64()
                .map(Some)
                .ok_or_else(|| anyhow!("config key {key:?} must be an integer")),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(serde_json::Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Ok(Some(other.to_string())),
        }
    }
}

fn resolve_f64(flag: Option<f64>, cfg: &ConfigFile, key: &str, default: f64) -> Result<f64> {
    Ok(flag.or(cfg.f64(key)?).unwrap_or(default))
}

fn resolve_usize(flag: Option<usize>, cfg: &ConfigFile, key: &str, default: usize) -> Result<usize> {
    Ok(flag.or(cfg.usize(key)?).unwrap_or(default))
}

fn resolve_u64(flag: Option<u64>, cfg: &ConfigFile, key: &str, default: u64) -> Result<u64> {
    Ok(flag.or(cfg.u64(key)?).unwrap_or(default))
}

fn resolve_string(
    flag: &Option<String>,
    cfg: &ConfigFile,
    key: &str,
    default: &str,
) -> Result<String> {
    Ok(flag
        .clone()
        .or(cfg.string(key)?)
        .unwrap_or_else(|| default.to_owned()))
}

fn resolve_metric(flag: &Option<String>, cfg: &ConfigFile) -> Result<Metric> {
    Ok(resolve_string(flag, cfg, "metric", "common-friends")?.parse()?)
}

/// Optional timestamp: flag string wins, then config (string or integer).
fn resolve_t_cut(flag: &Option<String>, cfg: &ConfigFile) -> Result<Option<i64>> {
    if let Some(s) = flag {
        return Ok(Some(parse_timestamp(s)?));
    }
    if let Some(v) = cfg.i64("t_cut").ok().flatten() {
        return Ok(Some(v));
    }
    match cfg.string("t_cut")? {
        Some(s) => Ok(Some(parse_timestamp(&s)?)),
        None => Ok(None),
    }
}

/// `a,b,c` or `start:end:step` (inclusive).
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [_] => spec
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad grid value {s:?}"))
            })
            .collect::<Result<Vec<f64>>>()?,
        [start, end, step] => {
            let start: f64 = start.trim().parse().context("bad grid start")?;
            let end: f64 = end.trim().parse().context("bad grid end")?;
            let step: f64 = step.trim().parse().context("bad grid step")?;
            if step <= 0.0 || end < start {
                bail!("grid must satisfy start <= end with positive step (got {spec:?})");
            }
            let n = ((end - start) / step).round() as usize;
            (0..=n)
                .map(|k| start + k as f64 * step)
                .filter(|&v| v <= end + step * 1e-9)
                .collect()
        }
        _ => bail!("grid must be `a,b,c` or `start:end:step` (got {spec:?})"),
    };
    if values.is_empty() {
        bail!("empty grid {spec:?}");
    }
    Ok(values)
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

/// Graph cache JSON (sniffed by a leading `{`) or edge-list TSV.
fn load_graph(path: &Path) -> Result<(SocialGraph, NodeIdMap)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read graph file {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        Ok(SocialGraph::from_cache_json(&text)?)
    } else {
        let load = graph::load_edge_list(text.as_bytes())?;
        if load.rejected_self_loops > 0 {
            eprintln!(
                "note: rejected {} self-loop line(s) in {}",
                load.rejected_self_loops,
                path.display()
            );
        }
        Ok((load.graph, load.ids))
    }
}

fn load_log(path: Option<&Path>, ids: &mut NodeIdMap) -> Result<RetweetLog> {
    let Some(path) = path else {
        return Ok(RetweetLog::empty());
    };
    let file =
        fs::File::open(path).with_context(|| format!("cannot read log file {}", path.display()))?;
    let load = graph::load_retweet_log(BufReader::new(file), ids)?;
    if load.rejected_self_retweets > 0 {
        eprintln!(
            "note: rejected {} self-retweet record(s) in {}",
            load.rejected_self_retweets,
            path.display()
        );
    }
    Ok(load.log)
}

/// One float per line; `#` comments and blank lines skipped.
fn load_sample_csv(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read sample file {}", path.display()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        values.push(content.parse::<f64>().with_context(|| {
            format!("{}:{}: bad value {content:?}", path.display(), lineno + 1)
        })?);
    }
    if values.is_empty() {
        bail!("{} holds no values", path.display());
    }
    Ok(values)
}

/// One timestamp per line (epoch seconds or ISO-8601).
fn load_timestamps_csv(path: &Path) -> Result<Vec<i64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read timestamp file {}", path.display()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        values.push(parse_timestamp(content).with_context(|| {
            format!("{}:{}: bad timestamp {content:?}", path.display(), lineno + 1)
        })?);
    }
    if values.is_empty() {
        bail!("{} holds no timestamps", path.display());
    }
    Ok(values)
}

fn graph_summary(g: &SocialGraph, ids: &NodeIdMap) -> serde_json::Value {
    serde_json::json!({
        "nodes": g.node_count(),
        "known_ids": ids.len(),
        "directed_edges": g.directed_edge_count(),
        "undirected_edges": g.undirected_edge_count(),
        "follow_reciprocity": g.follow_reciprocity(),
    })
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn ingest(args: &IngestArgs, _cfg: &ConfigFile, mut out: OutputDir, threads: Option<usize>) -> Result<()> {
    let text = fs::read_to_string(&args.edges)
        .with_context(|| format!("cannot read edge list {}", args.edges.display()))?;
    let load = graph::load_edge_list(text.as_bytes())?;
    let mut ids = load.ids;
    let graph = load.graph;

    let mut summary = graph_summary(&graph, &ids);
    summary["rejected_self_loops"] = load.rejected_self_loops.into();

    if let Some(log_path) = &args.log {
        let file = fs::File::open(log_path)
            .with_context(|| format!("cannot read log file {}", log_path.display()))?;
        let log_load = graph::load_retweet_log(BufReader::new(file), &mut ids)?;
        summary["log_records"] = log_load.log.len().into();
        summary["rejected_self_retweets"] = log_load.rejected_self_retweets.into();
        summary["known_ids"] = ids.len().into();
    }

    out.write("graph.json", &graph.to_cache_json(&ids)?)?;
    out.write_json("ingest-summary.json", &summary)?;
    if let Some(spec) = &args.dot_nodes {
        out.write("subset.dot", &dot_subset(&graph, &ids, spec)?)?;
    }

    let mut inputs: Vec<&Path> = vec![&args.edges];
    if let Some(log) = &args.log {
        inputs.push(log);
    }
    let parameters = serde_json::json!({ "dot_nodes": args.dot_nodes });
    out.finish("ingest", &inputs, parameters, threads)
}

/// DOT for the induced subgraph of comma-separated external node ids.
fn dot_subset(g: &SocialGraph, ids: &NodeIdMap, spec: &str) -> Result<String> {
    let nodes: Vec<NodeId> = spec
        .split(',')
        .map(|name| {
            ids.get(name.trim())
                .filter(|&n| g.contains_node(n))
                .ok_or_else(|| anyhow!("node {name:?} is not in the graph"))
        })
        .collect::<Result<_>>()?;
    Ok(g.to_dot(&nodes, Some(ids)))
}

fn synth(args: &SynthArgs, cfg: &ConfigFile, mut out: OutputDir, threads: Option<usize>) -> Result<()> {
    let blocks_spec = resolve_string(&args.blocks, cfg, "blocks", "500,500")?;
    let blocks: Vec<usize> = blocks_spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("bad block size {s:?}"))
        })
        .collect::<Result<_>>()?;
    let p_in = resolve_f64(args.p_in, cfg, "p_in", 0.05)?;
    let p_out = resolve_f64(args.p_out, cfg, "p_out", 0.005)?;
    let rng_seed = resolve_u64(args.rng_seed, cfg, "rng_seed", 0)?;

    let (graph, ids) = graph::sbm_generate(&blocks, p_in, p_out, rng_seed)?;
    out.write("graph.json", &graph.to_cache_json(&ids)?)?;
    out.write_json("synth-summary.json", &graph_summary(&graph, &ids))?;
    if let Some(spec) = &args.dot_nodes {
        out.write("subset.dot", &dot_subset(&graph, &ids, spec)?)?;
    }

    let parameters = serde_json::json!({
        "blocks": blocks, "p_in": p_in, "p_out": p_out, "rng_seed": rng_seed,
        "dot_nodes": args.dot_nodes,
    });
    out.finish("synth", &[], parameters, threads)
}

fn tie_strength(
    args: &TieStrengthArgs,
    cfg: &ConfigFile,
    mut out: OutputDir,
    threads: Option<usize>,
) -> Result<()> {
    let metric = resolve_metric(&args.metric, cfg)?;
    let t_cut = resolve_t_cut(&args.t_cut, cfg)?;
    let (graph, mut ids) = load_graph(&args.graph)?;
    let log = load_log(args.log.as_deref(), &mut ids)?;

    let table = tie::build_strength_table(&graph, &log, metric, t_cut)?;

    let mut csv = Csv::new("u,v,raw,normalized");
    for (e, &(u, v)) in graph.undirected_edges().iter().enumerate() {
        let raw = table.raw().map_or(table.value(e as u32), |r| r[e]);
        csv.row(&[
            CsvField::Str(ids.name(u).unwrap_or("?")),
            CsvField::Str(ids.name(v).unwrap_or("?")),
            CsvField::Float(raw),
            CsvField::Float(table.value(e as u32)),
        ]);
    }
    out.write("ties.csv", &csv.into_string())?;

    // The anger/joy comparison needs on-edge emotional retweets; a log
    // without them still yields a valid per-edge table, so that case lands
    // in the summary as a note instead of failing the command.
    let summary = match tie::compare_emotion_strengths(&graph, &log, metric) {
        Ok(s) => serde_json::to_value(&s)?,
        Err(contagion_core::Error::Statistics(msg)) => serde_json::json!({
            "note": format!("comparison unavailable: {msg}"),
        }),
        Err(e) => return Err(e.into()),
    };
    out.write_json("tie-summary.json", &summary)?;

    let parameters = serde_json::json!({
        "metric": metric, "t_cut": t_cut,
    });
    let mut inputs: Vec<&Path> = vec![&args.graph];
    if let Some(log) = &args.log {
        inputs.push(log);
    }
    out.finish("tie-strength", &inputs, parameters, threads)
}

fn simulate(
    args: &SimulateArgs,
    cfg: &ConfigFile,
    mut out: OutputDir,
    threads: Option<usize>,
) -> Result<()> {
    let metric = resolve_metric(&args.metric, cfg)?;
    let gamma = resolve_f64(args.gamma, cfg, "gamma", 0.6)?;
    let alpha = resolve_f64(args.alpha, cfg, "alpha", 0.0)?;
    let runs = resolve_usize(args.runs, cfg, "runs", 1)?;
    let max_steps = resolve_usize(args.max_steps, cfg, "max_steps", diffusion::DEFAULT_MAX_STEPS)?;
    let weight_floor = resolve_f64(
        args.weight_floor,
        cfg,
        "weight_floor",
        diffusion::DEFAULT_WEIGHT_FLOOR,
    )?;
    let rng_seed = resolve_u64(args.rng_seed, cfg, "rng_seed", 0)?;
    let t_cut = resolve_t_cut(&args.t_cut, cfg)?;
    let seed_node_name = args.seed_node.clone().or(cfg.string("seed_node")?);
    let snapshot_k = args.snapshot_k.or(cfg.usize("snapshot_k")?);

    let (graph, mut ids) = load_graph(&args.graph)?;
    let log = load_log(args.log.as_deref(), &mut ids)?;
    let table = tie::build_strength_table(&graph, &log, metric, t_cut)?;
    let dconfig = DiffusionConfig::new(gamma, alpha, metric)?
        .with_max_steps(max_steps)
        .with_weight_floor(weight_floor);

    let fixed_seed_node: Option<NodeId> = match &seed_node_name {
        None => None,
        Some(name) => Some(
            ids.get(name)
                .filter(|&n| graph.contains_node(n))
                .ok_or_else(|| anyhow!("seed node {name:?} is not a graph node"))?,
        ),
    };

    let traces =
        diffusion::run_replicates(&graph, &table, &dconfig, runs, rng_seed, fixed_seed_node)?;

    let mut aggregate = Csv::new("run,step,cumulative_infected");
    for (idx, trace) in traces.iter().enumerate() {
        out.write(&format!("trace-{idx:03}.json"), &trace.to_json()?)?;
        for (step, count) in trace.cumulative_counts().iter().enumerate() {
            aggregate.row(&[
                CsvField::Uint(idx as u64),
                CsvField::Uint(step as u64),
                CsvField::Uint(*count),
            ]);
        }
        if let Some(k) = snapshot_k {
            let snap = diffusion::snapshot_first_k(trace, &graph, k)?;
            out.write(&format!("snapshot-{idx:03}.dot"), &snap.to_dot(Some(&ids)))?;
        }
    }
    out.write("aggregate.csv", &aggregate.into_string())?;

    let parameters = serde_json::json!({
        "metric": metric, "gamma": gamma, "alpha": alpha, "runs": runs,
        "max_steps": max_steps, "weight_floor": weight_floor,
        "rng_seed": rng_seed, "seed_node": seed_node_name,
        "snapshot_k": snapshot_k, "t_cut": t_cut,
    });
    let mut inputs: Vec<&Path> = vec![&args.graph];
    if let Some(log) = &args.log {
        inputs.push(log);
    }
    out.finish("simulate", &inputs, parameters, threads)
}

fn burst_cmd(args: &BurstArgs, cfg: &ConfigFile, mut out: OutputDir, threads: Option<usize>) -> Result<()> {
    let bin_width = args
        .bin_width
        .or(cfg.i64("bin_width")?)
        .unwrap_or(events::DEFAULT_EVENT_BIN_WIDTH);

    let (curve, input): (contagion_core::burst::CumulativeCurve, PathBuf) =
        match (&args.timestamps, &args.trace) {
            (Some(path), None) => {
                let ts = load_timestamps_csv(path)?;
                (contagion_core::burst::cumulative_curve(&ts, bin_width)?, path.clone())
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read trace {}", path.display()))?;
                let trace = diffusion::DiffusionTrace::from_json(&text)?;
                let ys: Vec<f64> = trace.cumulative_counts().iter().map(|&c| c as f64).collect();
                (
                    contagion_core::burst::CumulativeCurve::from_cumulative(ys, 1.0, 0)?,
                    path.clone(),
                )
            }
            _ => bail!("exactly one of --timestamps or --trace is required"),
        };

    let mut csv = Csv::new("x,cumulative");
    for i in 0..curve.len() {
        let (x, y) = curve.point(i);
        csv.row(&[CsvField::Float(x), CsvField::Float(y)]);
    }
    out.write("curve.csv", &csv.into_string())?;

    // A curve without a detectable burst is a legitimate analysis outcome,
    // mirroring how whole events are carried with absent kinetics.
    let markers = match contagion_core::burst::detect_markers(&curve) {
        Ok(m) => serde_json::to_value(m)?,
        Err(e) if e.is_no_burst() => serde_json::json!({ "no_burst": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    out.write_json("markers.json", &markers)?;

    let parameters = serde_json::json!({ "bin_width": bin_width });
    out.finish("burst", &[input.as_path()], parameters, threads)
}

fn sweep_cmd(args: &SweepArgs, cfg: &ConfigFile, mut out: OutputDir, threads: Option<usize>) -> Result<()> {
    let metric = resolve_metric(&args.metric, cfg)?;
    let gammas = parse_grid(&resolve_string(&args.gammas, cfg, "gammas", "0.6")?)?;
    let alphas = parse_grid(&resolve_string(&args.alphas, cfg, "alphas", "-1:1:0.1")?)?;
    let runs = resolve_usize(args.runs, cfg, "runs", calibrate::DEFAULT_RUNS)?;
    let max_steps = resolve_usize(args.max_steps, cfg, "max_steps", diffusion::DEFAULT_MAX_STEPS)?;
    let weight_floor = resolve_f64(
        args.weight_floor,
        cfg,
        "weight_floor",
        diffusion::DEFAULT_WEIGHT_FLOOR,
    )?;
    let rng_seed = resolve_u64(args.rng_seed, cfg, "rng_seed", 0)?;
    let t_cut = resolve_t_cut(&args.t_cut, cfg)?;

    let (graph, mut ids) = load_graph(&args.graph)?;
    let log = load_log(args.log.as_deref(), &mut ids)?;
    let table = tie::build_strength_table(&graph, &log, metric, t_cut)?;

    let mut params = SweepParams::new(gammas.clone(), alphas, runs, rng_seed);
    params.max_steps = max_steps;
    params.weight_floor = weight_floor;
    let result = calibrate::sweep(&graph, &table, &params)?;

    for &gamma in &gammas {
        let mut csv = Csv::new("alpha,mean_slope,slope_sd,mean_coverage,coverage_sd,runs,no_burst_excluded");
        for cell in result.cells.iter().filter(|c| c.gamma == gamma) {
            csv.row(&[
                CsvField::Float(cell.alpha),
                CsvField::OptFloat(cell.mean_slope),
                CsvField::OptFloat(cell.slope_sd),
                CsvField::Float(cell.mean_coverage),
                CsvField::Float(cell.coverage_sd),
                CsvField::Uint(cell.runs as u64),
                CsvField::Uint(cell.no_burst_excluded as u64),
            ]);
        }
        out.write(
            &format!("sweep-gamma-{}.csv", crate::output::format_float(gamma)),
            &csv.into_string(),
        )?;
    }
    out.write_json("sweep.json", &result)?;

    let parameters = serde_json::json!({
        "metric": metric, "gammas": gammas, "alphas": params.alphas,
        "runs": runs, "max_steps": max_steps, "weight_floor": weight_floor,
        "rng_seed": rng_seed, "t_cut": t_cut,
    });
    let mut inputs: Vec<&Path> = vec![&args.graph];
    if let Some(log) = &args.log {
        inputs.push(log);
    }
    out.finish("sweep", &inputs, parameters, threads)
}

fn fit_cmd(args: &FitArgs, cfg: &ConfigFile, mut out: OutputDir, threads: Option<usize>) -> Result<()> {
    let metric = resolve_metric(&args.metric, cfg)?;
    let gamma = resolve_f64(args.gamma, cfg, "gamma", 0.6)?;
    let alphas = parse_grid(&resolve_string(&args.alphas, cfg, "alphas", "-1:1:0.1")?)?;
    let runs = resolve_usize(args.runs, cfg, "runs", calibrate::DEFAULT_RUNS)?;
    let bins = resolve_usize(args.bins, cfg, "bins", calibrate::DEFAULT_HISTOGRAM_BINS)?;
    let epsilon = resolve_f64(args.epsilon, cfg, "epsilon", calibrate::DEFAULT_KL_EPSILON)?;
    let max_steps = resolve_usize(args.max_steps, cfg, "max_steps", diffusion::DEFAULT_MAX_STEPS)?;
    let weight_floor = resolve_f64(
        args.weight_floor,
        cfg,
        "weight_floor",
        diffusion::DEFAULT_WEIGHT_FLOOR,
    )?;
    let rng_seed = resolve_u64(args.rng_seed, cfg, "rng_seed", 0)?;
    let t_cut = resolve_t_cut(&args.t_cut, cfg)?;
    let divergence = resolve_string(&args.divergence, cfg, "divergence", "both")?;

    let (graph, mut ids) = load_graph(&args.graph)?;
    let log = load_log(args.log.as_deref(), &mut ids)?;
    let table = tie::build_strength_table(&graph, &log, metric, t_cut)?;

    let empirical: Vec<f64> = match (&args.empirical, &args.emotion) {
        (Some(path), None) => load_sample_csv(path)?,
        (None, Some(emotion)) => {
            let emotion: Emotion = emotion.parse()?;
            calibrate::empirical_strength_sample(&graph, &log, &table, emotion)?
        }
        _ => bail!("exactly one of --empirical or --emotion is required"),
    };

    let mut params = FitParams::new(gamma, alphas, runs, rng_seed);
    params.bins = bins;
    params.epsilon = epsilon;
    params.max_steps = max_steps;
    params.weight_floor = weight_floor;

    let outcome = calibrate::fit_alpha_curves(&graph, &table, &empirical, &params)?;
    let write_curve = |out: &mut OutputDir, fit: &calibrate::FitResult| -> Result<()> {
        let mut csv = Csv::new("alpha,divergence");
        for &(a, v) in &fit.curve {
            csv.row(&[CsvField::Float(a), CsvField::Float(v)]);
        }
        out.write(&format!("fit-{}.csv", fit.divergence), &csv.into_string())
    };
    let fit_json = match divergence.as_str() {
        "both" => {
            write_curve(&mut out, &outcome.kl)?;
            write_curve(&mut out, &outcome.wasserstein)?;
            serde_json::to_value(&outcome)?
        }
        one => {
            let kind: DivergenceKind = one.parse()?;
            let fit = outcome.get(kind);
            write_curve(&mut out, fit)?;
            serde_json::to_value(fit)?
        }
    };
    out.write_json("fit.json", &fit_json)?;

    let parameters = serde_json::json!({
        "metric": metric, "gamma": gamma, "alphas": params.alphas, "runs": runs,
        "bins": bins, "epsilon": epsilon, "divergence": divergence,
        "max_steps": max_steps, "weight_floor": weight_floor,
        "rng_seed": rng_seed, "t_cut": t_cut,
        "empirical_sample_size": empirical.len(),
    });
    let mut inputs: Vec<&Path> = vec![&args.graph];
    if let Some(log) = &args.log {
        inputs.push(log);
    }
    if let Some(e) = &args.empirical {
        inputs.push(e);
    }
    out.finish("fit", &inputs, parameters, threads)
}

fn events_cmd(args: &EventsArgs, cfg: &ConfigFile, mut out: OutputDir, threads: Option<usize>) -> Result<()> {
    let opts = EventOptions {
        threshold: resolve_f64(args.threshold, cfg, "threshold", events::DEFAULT_DOMINANCE_THRESHOLD)?,
        bin_width: args
            .bin_width
            .or(cfg.i64("bin_width")?)
            .unwrap_or(events::DEFAULT_EVENT_BIN_WIDTH),
        count_all_tweets: args.all_tweets,
    };

    let file = fs::File::open(&args.input)
        .with_context(|| format!("cannot read events file {}", args.input.display()))?;
    let records = events::load_events_csv(BufReader::new(file))?;
    let analyses = events::analyze_events(&records, &opts)?;
    let summary = events::aggregate_by_dominance(&analyses);

    out.write_json("events.json", &analyses)?;
    out.write_json("event-summary.json", &summary)?;

    let mut csv = Csv::new("group,events,with_markers,mean_normalized_slope");
    for (name, group) in [("anger", &summary.anger), ("joy", &summary.joy)] {
        csv.row(&[
            CsvField::Str(name),
            CsvField::Uint(group.events as u64),
            CsvField::Uint(group.with_markers as u64),
            CsvField::OptFloat(group.mean_normalized_slope),
        ]);
    }
    out.write("event-summary.csv", &csv.into_string())?;

    let parameters = serde_json::json!({
        "threshold": opts.threshold, "bin_width": opts.bin_width,
        "all_tweets": opts.count_all_tweets,
    });
    out.finish("events", &[args.input.as_path()], parameters, threads)
}

fn stats_cmd(args: &StatsArgs, cfg: &ConfigFile, mut out: OutputDir, threads: Option<usize>) -> Result<()> {
    let bins = resolve_usize(args.bins, cfg, "bins", calibrate::DEFAULT_HISTOGRAM_BINS)?;
    let epsilon = resolve_f64(args.epsilon, cfg, "epsilon", calibrate::DEFAULT_KL_EPSILON)?;
    let what = resolve_string(&args.what, cfg, "what", "all")?;
    if !["divergences", "welch", "all"].contains(&what.as_str()) {
        bail!("--what must be divergences, welch or all (got {what:?})");
    }

    let a = load_sample_csv(&args.a)?;
    let b = load_sample_csv(&args.b)?;

    let mut notes: Vec<String> = Vec::new();
    let welch = if what == "divergences" {
        None
    } else {
        Some(stats::welch_t_test(&a, &b)?)
    };

    let in_unit = |xs: &[f64]| xs.iter().all(|&v| (0.0..=1.0).contains(&v));
    let divergences = if what == "welch" {
        None
    } else if in_unit(&a) && in_unit(&b) {
        let pa = Distribution::histogram(&a, bins)?;
        let pb = Distribution::histogram(&b, bins)?;
        Some((
            stats::kl_divergence(&pa, &pb, epsilon)?,
            stats::wasserstein_1d(&pa, &pb)?,
        ))
    } else if what == "divergences" {
        bail!("divergences need samples inside [0, 1]");
    } else {
        notes.push("divergences skipped: samples fall outside [0, 1]".to_owned());
        None
    };

    let result = serde_json::json!({
        "welch": welch,
        "kl": divergences.map(|d| d.0),
        "wasserstein": divergences.map(|d| d.1),
        "bins": bins,
        "epsilon": epsilon,
        "notes": notes,
    });
    out.write_json("stats.json", &result)?;

    let parameters = serde_json::json!({ "bins": bins, "epsilon": epsilon, "what": what });
    out.finish(
        "stats",
        &[args.a.as_path(), args.b.as_path()],
        parameters,
        threads,
    )
}
