//! Parameter sweeps over `(gamma, alpha)` and the divergence-minimizing fit
//! of the strength-preference exponent.
//!
//! A sweep runs a batch of seeded simulations per grid cell and aggregates
//! spread velocity (slope) and coverage. A fit compares, per candidate
//! `alpha`, the strength distribution of ties actually used by simulated
//! diffusion (`Q`) against an empirical per-retweet strength sample (`P`) and
//! returns the divergence curve with its argmin.
//!
//! Replicate `k` of cell `(gamma, alpha)` always draws the seed
//! `seeds::cell(root, gamma, alpha, k)`, so results are independent of
//! scheduling and thread count.

use serde::{Deserialize, Serialize};

use crate::burst;
use crate::diffusion::{self, DiffusionConfig, DiffusionTrace};
use crate::error::{Error, Result};
use crate::graph::{Emotion, RetweetLog, SocialGraph};
use crate::stats::{self, Distribution, DivergenceKind};
use crate::tie::{Metric, TieStrengthTable};

pub const DEFAULT_RUNS: usize = 50;
pub const DEFAULT_HISTOGRAM_BINS: usize = 20;
pub const DEFAULT_KL_EPSILON: f64 = 1e-6;

/// Sweep configuration; `new` fills the simulation defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepParams {
    pub gammas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub runs: usize,
    pub max_steps: usize,
    pub weight_floor: f64,
    pub rng_seed: u64,
}

impl SweepParams {
    pub fn new(gammas: Vec<f64>, alphas: Vec<f64>, runs: usize, rng_seed: u64) -> Self {
        Self {
            gammas,
            alphas,
            runs,
            max_steps: diffusion::DEFAULT_MAX_STEPS,
            weight_floor: diffusion::DEFAULT_WEIGHT_FLOOR,
            rng_seed,
        }
    }
}

/// Aggregates of one `(gamma, alpha)` grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub gamma: f64,
    pub alpha: f64,
    pub runs: usize,
    /// Runs without detectable awakening/peak, excluded from slope stats.
    pub no_burst_excluded: usize,
    /// Absent when every run was excluded.
    pub mean_slope: Option<f64>,
    pub slope_sd: Option<f64>,
    pub mean_coverage: f64,
    pub coverage_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, gamma: f64, alpha: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.gamma == gamma && c.alpha == alpha)
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let m = stats::mean(xs);
    let sd = if xs.len() > 1 {
        stats::sample_variance(xs, m).sqrt()
    } else {
        0.0
    };
    (m, sd)
}

/// Run `params.runs` seeded simulations per grid cell, with a uniformly
/// random seed node per replicate, and aggregate slope and coverage.
pub fn sweep(g: &SocialGraph, table: &TieStrengthTable, params: &SweepParams) -> Result<SweepResult> {
    if params.gammas.is_empty() || params.alphas.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    if params.runs == 0 {
        return Err(Error::InvalidArgument("sweep needs at least 1 run".into()));
    }
    if g.node_count() == 0 {
        return Err(Error::InvalidArgument("sweep over an empty graph".into()));
    }

    let mut cells = Vec::with_capacity(params.gammas.len() * params.alphas.len());
    for &gamma in &params.gammas {
        for &alpha in &params.alphas {
            let traces = simulate_cell(g, table, params, gamma, alpha)?;
            let mut slopes = Vec::new();
            let mut no_burst_excluded = 0usize;
            let mut coverages = Vec::with_capacity(traces.len());
            for trace in &traces {
                coverages.push(trace.coverage() as f64);
                match burst::trace_velocity(trace) {
                    Ok(m) => slopes.push(m.slope),
                    Err(e) if e.is_no_burst() => no_burst_excluded += 1,
                    Err(e) => return Err(e),
                }
            }
            let (mean_slope, slope_sd) = if slopes.is_empty() {
                (None, None)
            } else {
                let (m, sd) = mean_sd(&slopes);
                (Some(m), Some(sd))
            };
            let (mean_coverage, coverage_sd) = mean_sd(&coverages);
            cells.push(SweepCell {
                gamma,
                alpha,
                runs: traces.len(),
                no_burst_excluded,
                mean_slope,
                slope_sd,
                mean_coverage,
                coverage_sd,
            });
        }
    }
    Ok(SweepResult { cells })
}

/// Simulate one cell's replicates in parallel, reduced in replicate order.
fn simulate_cell(
    g: &SocialGraph,
    table: &TieStrengthTable,
    params: &SweepParams,
    gamma: f64,
    alpha: f64,
) -> Result<Vec<DiffusionTrace>> {
    let cfg = DiffusionConfig::new(gamma, alpha, table.metric())?
        .with_max_steps(params.max_steps)
        .with_weight_floor(params.weight_floor);
    diffusion::run_replicates(g, table, &cfg, params.runs, params.rng_seed, None)
}

/// One strength value per retweet of the given emotion whose endpoints form
/// a graph edge.
pub fn empirical_strength_sample(
    g: &SocialGraph,
    log: &RetweetLog,
    table: &TieStrengthTable,
    emotion: Emotion,
) -> Result<Vec<f64>> {
    let mut sample = Vec::new();
    for r in log.records() {
        if r.emotion != emotion {
            continue;
        }
        if let Some(e) = g.edge_index(r.retweeter, r.author) {
            sample.push(table.value(e));
        }
    }
    if sample.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no {emotion} retweets fall on graph edges"
        )));
    }
    Ok(sample)
}

/// Fit configuration; `new` fills the defaults (`gamma` is conventionally
/// fixed at 0.6 for fitting).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitParams {
    pub gamma: f64,
    pub alphas: Vec<f64>,
    pub runs: usize,
    pub bins: usize,
    pub epsilon: f64,
    pub max_steps: usize,
    pub weight_floor: f64,
    pub rng_seed: u64,
}

impl FitParams {
    pub fn new(gamma: f64, alphas: Vec<f64>, runs: usize, rng_seed: u64) -> Self {
        Self {
            gamma,
            alphas,
            runs,
            bins: DEFAULT_HISTOGRAM_BINS,
            epsilon: DEFAULT_KL_EPSILON,
            max_steps: diffusion::DEFAULT_MAX_STEPS,
            weight_floor: diffusion::DEFAULT_WEIGHT_FLOOR,
            rng_seed,
        }
    }

    /// The conventional alpha grid: -1 to 1 in steps of 0.1.
    pub fn default_alpha_grid() -> Vec<f64> {
        (-10..=10).map(|k| k as f64 / 10.0).collect()
    }
}

/// Divergence curve over the alpha grid with its minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub metric: Metric,
    pub divergence: DivergenceKind,
    pub gamma: f64,
    /// `(alpha, divergence)` across the grid.
    pub curve: Vec<(f64, f64)>,
    /// Grid alpha attaining the minimum; ties break toward smaller alpha.
    pub argmin_alpha: f64,
}

/// Both divergence curves computed from one set of simulations per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutcome {
    pub kl: FitResult,
    pub wasserstein: FitResult,
}

impl FitOutcome {
    pub fn get(&self, kind: DivergenceKind) -> &FitResult {
        match kind {
            DivergenceKind::Kl => &self.kl,
            DivergenceKind::Wasserstein => &self.wasserstein,
        }
    }
}

fn distribution_for(metric: Metric, sample: &[f64], bins: usize) -> Result<Distribution> {
    match metric {
        Metric::CommonFriends => Distribution::histogram(sample, bins),
        // Reciprocity compares Bernoulli distributions: a tie carries flux in
        // both directions exactly when its ratio is positive.
        Metric::Reciprocity => {
            let indicators: Vec<bool> = sample.iter().map(|&v| v > 0.0).collect();
            Distribution::from_indicators(&indicators)
        }
        Metric::Retweets => Err(Error::UnsupportedMetric(
            "retweets: diffusion uses each connection at most once per run, so retweet \
             counts cannot be fit"
                .into(),
        )),
    }
}

/// Sweep the alpha grid at fixed `gamma`, building `Q` from the ties used by
/// simulated diffusion, and compute both divergences to the empirical `P`.
pub fn fit_alpha_curves(
    g: &SocialGraph,
    table: &TieStrengthTable,
    empirical: &[f64],
    params: &FitParams,
) -> Result<FitOutcome> {
    if params.alphas.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    if empirical.is_empty() {
        return Err(Error::InvalidArgument("empty empirical sample".into()));
    }
    let metric = table.metric();
    let p = distribution_for(metric, empirical, params.bins)?;

    let sweep_params = SweepParams {
        gammas: vec![params.gamma],
        alphas: params.alphas.clone(),
        runs: params.runs,
        max_steps: params.max_steps,
        weight_floor: params.weight_floor,
        rng_seed: params.rng_seed,
    };
    let mut kl_curve = Vec::with_capacity(params.alphas.len());
    let mut w_curve = Vec::with_capacity(params.alphas.len());
    for &alpha in &params.alphas {
        let traces = simulate_cell(g, table, &sweep_params, params.gamma, alpha)?;
        let usage = diffusion::edge_usage_distribution(g, table, &traces)?;
        if usage.is_empty() {
            return Err(Error::Statistics(format!(
                "no diffusion events at alpha={alpha}; raise gamma or the run count"
            )));
        }
        let q = distribution_for(metric, &usage, params.bins)?;
        kl_curve.push((alpha, stats::kl_divergence(&p, &q, params.epsilon)?));
        w_curve.push((alpha, stats::wasserstein_1d(&p, &q)?));
    }

    let build = |divergence: DivergenceKind, curve: Vec<(f64, f64)>| -> Result<FitResult> {
        let mut best = curve[0];
        for &(a, v) in &curve[1..] {
            if v < best.1 {
                best = (a, v);
            }
        }
        if !best.1.is_finite() {
            return Err(Error::Statistics(format!(
                "{divergence} divergence is not finite anywhere on the grid"
            )));
        }
        Ok(FitResult {
            metric,
            divergence,
            gamma: params.gamma,
            curve,
            argmin_alpha: best.0,
        })
    };
    Ok(FitOutcome {
        kl: build(DivergenceKind::Kl, kl_curve)?,
        wasserstein: build(DivergenceKind::Wasserstein, w_curve)?,
    })
}

/// [`fit_alpha_curves`] restricted to one divergence kind.
pub fn fit_alpha(
    g: &SocialGraph,
    table: &TieStrengthTable,
    empirical: &[f64],
    params: &FitParams,
    kind: DivergenceKind,
) -> Result<FitResult> {
    let outcome = fit_alpha_curves(g, table, empirical, params)?;
    Ok(match kind {
        DivergenceKind::Kl => outcome.kl,
        DivergenceKind::Wasserstein => outcome.wasserstein,
    })
}
