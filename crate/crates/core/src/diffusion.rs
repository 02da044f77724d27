//! SI-variant contagion with a tie-strength preference.
//!
//! A susceptible node `s` next to an infected node `i` becomes infected with
//! probability `min(1, gamma * w_is^alpha / sum_n w_in^alpha)`, where the sum
//! runs over all neighbors `n` of `i`. `gamma` scales overall contagiousness;
//! `alpha < 0` prefers weak ties, `alpha > 0` strong ties, `alpha = 0` is
//! uniform. Steps are synchronous; infected nodes stay infected and retry
//! every step until the horizon, full reachable infection, or (at `gamma = 0`)
//! a provably dead frontier.
//!
//! One run is single-threaded and fully determined by its RNG seed; replicate
//! runs parallelize at a higher level over the immutable graph and weights.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeIdMap, SocialGraph};
use crate::tie::{Metric, TieStrengthTable};

pub const DEFAULT_MAX_STEPS: usize = 50;
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-6;

/// Parameters of the diffusion model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionConfig {
    /// Contagious tendency, `>= 0`.
    pub gamma: f64,
    /// Tie-strength preference exponent.
    pub alpha: f64,
    /// Metric the weight table must have been built with.
    pub metric: Metric,
    /// Step horizon; coverage is measured at this finite horizon.
    pub max_steps: usize,
    /// Substituted for zero-strength edges before exponentiation, so `w^alpha`
    /// stays finite for negative `alpha`.
    pub weight_floor: f64,
}

impl DiffusionConfig {
    pub fn new(gamma: f64, alpha: f64, metric: Metric) -> Result<Self> {
        let cfg = Self {
            gamma,
            alpha,
            metric,
            max_steps: DEFAULT_MAX_STEPS,
            weight_floor: DEFAULT_WEIGHT_FLOOR,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_weight_floor(mut self, weight_floor: f64) -> Self {
        self.weight_floor = weight_floor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be >= 0 (got {})",
                self.gamma
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "alpha must be finite (got {})",
                self.alpha
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be >= 1".into()));
        }
        if !(self.weight_floor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weight_floor must be > 0 (got {})",
                self.weight_floor
            )));
        }
        Ok(())
    }
}

/// Probability that infected `i` infects neighbor `target` in one step, given
/// `i`'s full neighbor weight list.
///
/// The normalization sums over every neighbor of `i`, infected or not.
pub fn infection_probability(
    cfg: &DiffusionConfig,
    neighbor_weights: &[(NodeId, f64)],
    target: NodeId,
) -> Result<f64> {
    cfg.validate()?;
    if neighbor_weights.is_empty() {
        return Err(Error::InvalidArgument(
            "infection probability over an empty neighbor list".into(),
        ));
    }
    let mut denom = 0.0;
    let mut target_pow = None;
    for &(n, w) in neighbor_weights {
        let pow = w.max(cfg.weight_floor).powf(cfg.alpha);
        denom += pow;
        if n == target {
            target_pow = Some(pow);
        }
    }
    let target_pow = target_pow.ok_or_else(|| {
        Error::InvalidArgument(format!("target {target} is not in the neighbor list"))
    })?;
    Ok(clamped_probability(cfg.gamma, target_pow, denom))
}

fn clamped_probability(gamma: f64, weight_pow: f64, denom: f64) -> f64 {
    if gamma == 0.0 || !denom.is_finite() || denom <= 0.0 {
        return 0.0;
    }
    (gamma * weight_pow / denom).clamp(0.0, 1.0)
}

/// Per-adjacency-slot transmission probabilities, precomputed once per
/// `(graph, table, config)` and shared across replicate runs.
#[derive(Debug, Clone)]
pub struct TransmissionProbs {
    probs: Vec<f64>,
    max_prob: f64,
}

impl TransmissionProbs {
    pub fn slot(&self, slot: usize) -> f64 {
        self.probs[slot]
    }
}

/// Precompute `p(i infects s)` for every adjacency slot of every node.
pub fn transmission_probs(
    g: &SocialGraph,
    table: &TieStrengthTable,
    cfg: &DiffusionConfig,
) -> Result<TransmissionProbs> {
    cfg.validate()?;
    if table.metric() != cfg.metric {
        return Err(Error::InvalidArgument(format!(
            "config expects the {} metric but the table was built with {}",
            cfg.metric,
            table.metric()
        )));
    }
    if table.len() != g.undirected_edge_count() {
        return Err(Error::InvalidArgument(format!(
            "table covers {} edges but the graph has {}",
            table.len(),
            g.undirected_edge_count()
        )));
    }
    let edge_of_slot = g.adjacency_edge_indices();
    let mut probs = vec![0.0; edge_of_slot.len()];
    let mut max_prob = 0.0f64;
    for i in 0..g.node_count() as NodeId {
        let range = g.slot_range(i);
        let mut denom = 0.0;
        for slot in range.clone() {
            let w = table.value(edge_of_slot[slot]).max(cfg.weight_floor);
            let pow = w.powf(cfg.alpha);
            probs[slot] = pow; // stash the power, normalize below
            denom += pow;
        }
        for slot in range {
            let p = clamped_probability(cfg.gamma, probs[slot], denom);
            probs[slot] = p;
            max_prob = max_prob.max(p);
        }
    }
    Ok(TransmissionProbs { probs, max_prob })
}

/// One infection event; the seed has step 0 and no infector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfectionRecord {
    pub node: NodeId,
    pub step: u32,
    pub infector: Option<NodeId>,
}

/// Outcome of a single simulation run.
///
/// `records` is ordered by infection time (step, then node id); the infecting
/// edges form a tree rooted at the seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffusionTrace {
    pub seed_node: NodeId,
    pub rng_seed: u64,
    pub records: Vec<InfectionRecord>,
    pub per_step_new: Vec<usize>,
}

impl DiffusionTrace {
    /// Number of nodes infected by the end of the run.
    pub fn coverage(&self) -> usize {
        self.records.len()
    }

    pub fn infection_time(&self, node: NodeId) -> Option<u32> {
        self.records
            .iter()
            .find(|r| r.node == node)
            .map(|r| r.step)
    }

    /// `(infector, infected)` pairs, one per non-seed infection.
    pub fn infecting_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.records
            .iter()
            .filter_map(|r| r.infector.map(|i| (i, r.node)))
    }

    /// Cumulative infected count per step, starting at step 0 with the seed.
    pub fn cumulative_counts(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.per_step_new.len() + 1);
        let mut total = 1u64;
        out.push(total);
        for &new in &self.per_step_new {
            total += new as u64;
            out.push(total);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Run one simulation with precomputed transmission probabilities.
pub fn run_with_probs(
    g: &SocialGraph,
    tp: &TransmissionProbs,
    cfg: &DiffusionConfig,
    seed_node: NodeId,
    rng_seed: u64,
) -> Result<DiffusionTrace> {
    if !g.contains_node(seed_node) {
        return Err(Error::UnknownNode(seed_node.to_string()));
    }
    let mut rng = Pcg64::seed_from_u64(rng_seed);
    let targets = g.adjacency_targets();
    let mut infected = vec![false; g.node_count()];
    infected[seed_node as usize] = true;
    let mut order = vec![seed_node];
    let mut records = vec![InfectionRecord {
        node: seed_node,
        step: 0,
        infector: None,
    }];
    let mut per_step_new = Vec::new();

    for step in 1..=cfg.max_steps as u32 {
        // (target, successful infector) pairs, in deterministic trial order:
        // infected nodes in infection order, neighbors in sorted order.
        let mut successes: Vec<(NodeId, NodeId)> = Vec::new();
        let mut frontier_trials = 0usize;
        for &i in &order {
            for slot in g.slot_range(i) {
                let s = targets[slot];
                if !infected[s as usize] {
                    frontier_trials += 1;
                    let p = tp.probs[slot];
                    if p > 0.0 && rng.gen::<f64>() < p {
                        successes.push((s, i));
                    }
                }
            }
        }
        if frontier_trials == 0 {
            break; // all reachable nodes are infected
        }

        // When several infectors reach the same node in one step, attribute
        // the infection uniformly among them.
        successes.sort_by_key(|&(s, _)| s);
        let mut new_count = 0usize;
        let mut k = 0;
        while k < successes.len() {
            let s = successes[k].0;
            let mut end = k + 1;
            while end < successes.len() && successes[end].0 == s {
                end += 1;
            }
            let pick = if end - k == 1 {
                k
            } else {
                k + rng.gen_range(0..end - k)
            };
            records.push(InfectionRecord {
                node: s,
                step,
                infector: Some(successes[pick].1),
            });
            infected[s as usize] = true;
            order.push(s);
            new_count += 1;
            k = end;
        }
        per_step_new.push(new_count);

        if new_count == 0 && tp.max_prob == 0.0 {
            break; // nothing happened and nothing ever can
        }
    }

    Ok(DiffusionTrace {
        seed_node,
        rng_seed,
        records,
        per_step_new,
    })
}

/// Run one simulation, precomputing probabilities on the fly.
pub fn run(
    g: &SocialGraph,
    table: &TieStrengthTable,
    cfg: &DiffusionConfig,
    seed_node: NodeId,
    rng_seed: u64,
) -> Result<DiffusionTrace> {
    let tp = transmission_probs(g, table, cfg)?;
    run_with_probs(g, &tp, cfg, seed_node, rng_seed)
}

/// Run a batch of replicate simulations (in parallel), returned in replicate
/// order.
///
/// Replicate `k` draws its stream from `seeds::cell(rng_seed, gamma, alpha,
/// k)`: first the seed node (uniform, unless `seed_node` pins one), then the
/// run seed. The schedule is independent of thread count and identical to the
/// one the sweep and fit pipelines use.
pub fn run_replicates(
    g: &SocialGraph,
    table: &TieStrengthTable,
    cfg: &DiffusionConfig,
    runs: usize,
    rng_seed: u64,
    seed_node: Option<NodeId>,
) -> Result<Vec<DiffusionTrace>> {
    if let Some(n) = seed_node {
        if !g.contains_node(n) {
            return Err(Error::UnknownNode(n.to_string()));
        }
    }
    if g.node_count() == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    let tp = transmission_probs(g, table, cfg)?;
    let traces: Vec<Result<DiffusionTrace>> = crate::exec::map_indexed(runs, |replicate| {
        let mut rng = Pcg64::seed_from_u64(crate::seeds::cell(
            rng_seed,
            cfg.gamma,
            cfg.alpha,
            replicate as u64,
        ));
        let node = match seed_node {
            Some(n) => n,
            None => rng.gen_range(0..g.node_count()) as NodeId,
        };
        let run_seed = rng.gen::<u64>();
        run_with_probs(g, &tp, cfg, node, run_seed)
    });
    traces.into_iter().collect()
}

/// Induced subgraph of the first `k` infected nodes with tree edges marked.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Snapshot {
    /// `(node, infection step)` in infection order.
    pub nodes: Vec<(NodeId, u32)>,
    /// Induced undirected edges `(u, v)` with `u < v`, sorted.
    pub induced_edges: Vec<(NodeId, NodeId)>,
    /// Infection-tree edges `(infector, infected)` inside the snapshot.
    pub tree_edges: Vec<(NodeId, NodeId)>,
}

impl Snapshot {
    /// DOT rendering; infection-tree edges are drawn bold.
    pub fn to_dot(&self, ids: Option<&NodeIdMap>) -> String {
        let label = |n: NodeId| -> String {
            match ids.and_then(|m| m.name(n)) {
                Some(name) => name.to_owned(),
                None => n.to_string(),
            }
        };
        let tree: std::collections::HashSet<(NodeId, NodeId)> = self
            .tree_edges
            .iter()
            .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        let mut out = String::from("graph snapshot {\n");
        for &(n, step) in &self.nodes {
            out.push_str(&format!("  \"{}\" [step={step}];\n", label(n)));
        }
        for &(u, v) in &self.induced_edges {
            if tree.contains(&(u, v)) {
                out.push_str(&format!(
                    "  \"{}\" -- \"{}\" [style=bold];\n",
                    label(u),
                    label(v)
                ));
            } else {
                out.push_str(&format!("  \"{}\" -- \"{}\";\n", label(u), label(v)));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The first `k` infected nodes (by infection time, ties broken by node id)
/// with their induced edges and infection-tree edges.
pub fn snapshot_first_k(trace: &DiffusionTrace, g: &SocialGraph, k: usize) -> Result<Snapshot> {
    if k == 0 {
        return Err(Error::InvalidArgument("snapshot size must be >= 1".into()));
    }
    let taken = &trace.records[..k.min(trace.records.len())];
    let nodes: Vec<(NodeId, u32)> = taken.iter().map(|r| (r.node, r.step)).collect();
    let in_set: std::collections::HashSet<NodeId> = nodes.iter().map(|&(n, _)| n).collect();

    let mut induced_edges = Vec::new();
    for &(n, _) in &nodes {
        for &m in g.neighbors(n) {
            if n < m && in_set.contains(&m) {
                induced_edges.push((n, m));
            }
        }
    }
    induced_edges.sort_unstable();

    // A node's infector is infected strictly earlier, so it precedes the node
    // in infection order and is always inside the snapshot.
    let tree_edges: Vec<(NodeId, NodeId)> = taken
        .iter()
        .filter_map(|r| r.infector.map(|i| (i, r.node)))
        .collect();

    Ok(Snapshot {
        nodes,
        induced_edges,
        tree_edges,
    })
}

/// Tie strengths of every infecting edge across the given traces (each
/// infection contributes once).
pub fn edge_usage_distribution(
    g: &SocialGraph,
    table: &TieStrengthTable,
    traces: &[DiffusionTrace],
) -> Result<Vec<f64>> {
    if traces.is_empty() {
        return Err(Error::InvalidArgument(
            "edge usage over an empty trace list".into(),
        ));
    }
    let mut sample = Vec::new();
    for trace in traces {
        for (infector, node) in trace.infecting_edges() {
            let e = g.edge_index(infector, node).ok_or_else(|| {
                Error::InvalidArgument(format!("trace uses non-edge ({infector}, {node})"))
            })?;
            sample.push(table.value(e));
        }
    }
    Ok(sample)
}
