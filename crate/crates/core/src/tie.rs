//! Per-edge tie-strength metrics and the per-emotion strength comparison.
//!
//! Three metrics quantify how strong the connection behind an undirected
//! edge is:
//!
//! * common friends — `c / (k_i - 1 + k_j - 1 - c)` where `c` is the number
//!   of shared undirected neighbors and `k` the undirected degrees;
//! * reciprocity — the share of reciprocal retweets in the pair's total
//!   retweet flux, `2 min(r_ij, r_ji) / (r_ij + r_ji)`, plus a binary
//!   indicator that both directions carry flux;
//! * retweet strength — the raw retweet count between the two ends, counted
//!   strictly before a cutoff and min-max normalized across all edges.
//!
//! All values land in `[0, 1]` and are symmetric in the edge's endpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{Emotion, NodeId, RetweetLog, SocialGraph};
use crate::stats::{self, WelchResult};

/// Tie-strength metric selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    CommonFriends,
    Reciprocity,
    Retweets,
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::CommonFriends => f.write_str("common-friends"),
            Metric::Reciprocity => f.write_str("reciprocity"),
            Metric::Retweets => f.write_str("retweets"),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "common-friends" => Ok(Metric::CommonFriends),
            "reciprocity" => Ok(Metric::Reciprocity),
            "retweets" => Ok(Metric::Retweets),
            other => Err(Error::InvalidArgument(format!(
                "unknown metric {other:?} (expected common-friends, reciprocity or retweets)"
            ))),
        }
    }
}

/// Normalized strength per undirected edge, indexed like
/// [`SocialGraph::undirected_edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct TieStrengthTable {
    metric: Metric,
    values: Vec<f64>,
    raw: Option<Vec<f64>>,
    bounds: Option<(f64, f64)>,
}

impl TieStrengthTable {
    /// Wrap precomputed per-edge values (all must lie in `[0, 1]`).
    pub fn from_values(metric: Metric, values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "tie strength {v} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            metric,
            values,
            raw: None,
            bounds: None,
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Normalized strength of the edge with the given index.
    pub fn value(&self, edge_index: u32) -> f64 {
        self.values[edge_index as usize]
    }

    /// Strength of the undirected edge `(i, j)`.
    pub fn value_between(&self, g: &SocialGraph, i: NodeId, j: NodeId) -> Result<f64> {
        let e = g
            .edge_index(i, j)
            .ok_or_else(|| Error::InvalidArgument(format!("({i}, {j}) is not an edge")))?;
        Ok(self.value(e))
    }

    /// Bernoulli view of a reciprocity edge: the ratio is positive exactly
    /// when both directions carry flux.
    pub fn indicator(&self, edge_index: u32) -> bool {
        self.value(edge_index) > 0.0
    }

    /// Raw (unnormalized) counts; present for the retweets metric.
    pub fn raw(&self) -> Option<&[f64]> {
        self.raw.as_deref()
    }

    /// `(s_min, s_max)` normalization bounds; present for the retweets metric.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Common-friends strength of the edge `(i, j)`.
///
/// Returns 0 when the denominator vanishes (two nodes linked only to each
/// other carry no overlap evidence).
pub fn common_friends_strength(g: &SocialGraph, i: NodeId, j: NodeId) -> Result<f64> {
    if !g.is_edge(i, j) {
        return Err(Error::InvalidArgument(format!(
            "({i}, {j}) is not an undirected edge"
        )));
    }
    let c = g.common_neighbors(i, j)? as f64;
    let denom = g.degree(i) as f64 - 1.0 + g.degree(j) as f64 - 1.0 - c;
    if denom <= 0.0 {
        Ok(0.0)
    } else {
        Ok(c / denom)
    }
}

/// Reciprocity of retweet flux between `i` and `j` strictly before `t_cut`
/// (`None` uses the whole log).
///
/// Returns `(ratio, indicator)`: the ratio is `2 min(r_ij, r_ji) / flux` when
/// the total flux is positive, else 0; the indicator is true when both
/// directions are nonzero.
pub fn reciprocity_strength(
    log: &RetweetLog,
    i: NodeId,
    j: NodeId,
    t_cut: Option<i64>,
) -> (f64, bool) {
    let mut forward = 0u64;
    let mut backward = 0u64;
    for r in log.records() {
        if let Some(cut) = t_cut {
            if r.timestamp >= cut {
                break; // records are time-sorted
            }
        }
        if r.retweeter == i && r.author == j {
            forward += 1;
        } else if r.retweeter == j && r.author == i {
            backward += 1;
        }
    }
    ratio_and_indicator(forward, backward)
}

fn ratio_and_indicator(forward: u64, backward: u64) -> (f64, bool) {
    let flux = forward + backward;
    if flux == 0 {
        return (0.0, false);
    }
    let ratio = 2.0 * forward.min(backward) as f64 / flux as f64;
    (ratio, forward > 0 && backward > 0)
}

/// Total retweet count between `i` and `j` strictly before `t_cut`.
pub fn retweet_strength_raw(log: &RetweetLog, i: NodeId, j: NodeId, t_cut: i64) -> u64 {
    log.records()
        .iter()
        .take_while(|r| r.timestamp < t_cut)
        .filter(|r| (r.retweeter == i && r.author == j) || (r.retweeter == j && r.author == i))
        .count() as u64
}

/// Min-max normalize raw per-edge counts into a retweets-metric table.
///
/// When every raw value is equal the normalized values are all 0, so the
/// degenerate range never produces NaN weights.
pub fn normalize_min_max(raw: Vec<f64>) -> Result<TieStrengthTable> {
    if raw.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot normalize an empty value map".into(),
        ));
    }
    let s_min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let s_max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let values = if s_max > s_min {
        raw.iter().map(|&s| (s - s_min) / (s_max - s_min)).collect()
    } else {
        vec![0.0; raw.len()]
    };
    Ok(TieStrengthTable {
        metric: Metric::Retweets,
        values,
        raw: Some(raw),
        bounds: Some((s_min, s_max)),
    })
}

/// Build the strength table over all undirected edges of `g`.
///
/// The common-friends metric uses the graph alone; reciprocity and retweets
/// read the log. `t_cut` is required for the retweets metric and optional for
/// reciprocity.
pub fn build_strength_table(
    g: &SocialGraph,
    log: &RetweetLog,
    metric: Metric,
    t_cut: Option<i64>,
) -> Result<TieStrengthTable> {
    let edges = g.undirected_edges();
    match metric {
        Metric::CommonFriends => {
            let values: Vec<Result<f64>> = exec::map_indexed(edges.len(), |e| {
                let (u, v) = edges[e];
                common_friends_strength(g, u, v)
            });
            let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
            Ok(TieStrengthTable {
                metric,
                values,
                raw: None,
                bounds: None,
            })
        }
        Metric::Reciprocity => {
            let index = log.pair_index();
            let values: Vec<f64> = exec::map_indexed(edges.len(), |e| {
                let (u, v) = edges[e];
                let forward = index.count_before(u, v, t_cut);
                let backward = index.count_before(v, u, t_cut);
                ratio_and_indicator(forward, backward).0
            });
            Ok(TieStrengthTable {
                metric,
                values,
                raw: None,
                bounds: None,
            })
        }
        Metric::Retweets => {
            let cut = t_cut.ok_or_else(|| {
                Error::InvalidArgument("retweets metric requires a t_cut timestamp".into())
            })?;
            let index = log.pair_index();
            let raw: Vec<f64> = exec::map_indexed(edges.len(), |e| {
                let (u, v) = edges[e];
                (index.count_before(u, v, Some(cut)) + index.count_before(v, u, Some(cut))) as f64
            });
            normalize_min_max(raw)
        }
    }
}

/// Mean and standard error of one emotion's per-retweet strength sample.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
}

fn sample_stats(sample: &[f64]) -> SampleStats {
    let mean = stats::mean(sample);
    let std_error = if sample.len() > 1 {
        (stats::sample_variance(sample, mean) / sample.len() as f64).sqrt()
    } else {
        0.0
    };
    SampleStats {
        n: sample.len(),
        mean,
        std_error,
    }
}

/// Per-emotion tie-strength comparison over all emotional retweets.
#[derive(Debug, Clone, Serialize)]
pub struct EmotionStrengthSummary {
    pub metric: Metric,
    pub anger: SampleStats,
    pub joy: SampleStats,
    pub welch: WelchResult,
    /// Anger/joy records whose endpoints are not a graph edge.
    pub skipped_non_edges: usize,
    #[serde(skip)]
    pub anger_sample: Vec<f64>,
    #[serde(skip)]
    pub joy_sample: Vec<f64>,
}

/// Evaluate tie strength at every anger/joy retweet and compare the two
/// emotions with Welch's t-test.
///
/// The retweets metric evaluates each retweet against the flux strictly
/// before its own timestamp and min-max normalizes over the pooled
/// observations of both emotions; the other metrics are time-independent.
pub fn compare_emotion_strengths(
    g: &SocialGraph,
    log: &RetweetLog,
    metric: Metric,
) -> Result<EmotionStrengthSummary> {
    let index = log.pair_index();
    let common_friends_table = match metric {
        Metric::CommonFriends => Some(build_strength_table(g, log, metric, None)?),
        _ => None,
    };

    let mut anger_values = Vec::new();
    let mut joy_values = Vec::new();
    let mut skipped_non_edges = 0usize;
    for r in log.records() {
        if r.emotion != Emotion::Anger && r.emotion != Emotion::Joy {
            continue;
        }
        let Some(edge) = g.edge_index(r.retweeter, r.author) else {
            skipped_non_edges += 1;
            continue;
        };
        let value = match metric {
            Metric::CommonFriends => common_friends_table.as_ref().unwrap().value(edge),
            Metric::Reciprocity => {
                let forward = index.count_before(r.retweeter, r.author, None);
                let backward = index.count_before(r.author, r.retweeter, None);
                ratio_and_indicator(forward, backward).0
            }
            Metric::Retweets => {
                // Raw count for now; pooled normalization below.
                (index.count_before(r.retweeter, r.author, Some(r.timestamp))
                    + index.count_before(r.author, r.retweeter, Some(r.timestamp)))
                    as f64
            }
        };
        match r.emotion {
            Emotion::Anger => anger_values.push(value),
            Emotion::Joy => joy_values.push(value),
            _ => unreachable!(),
        }
    }

    if metric == Metric::Retweets {
        let pooled: Vec<f64> = anger_values.iter().chain(&joy_values).copied().collect();
        if !pooled.is_empty() {
            let s_min = pooled.iter().copied().fold(f64::INFINITY, f64::min);
            let s_max = pooled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let norm = |v: f64| {
                if s_max > s_min {
                    (v - s_min) / (s_max - s_min)
                } else {
                    0.0
                }
            };
            anger_values.iter_mut().for_each(|v| *v = norm(*v));
            joy_values.iter_mut().for_each(|v| *v = norm(*v));
        }
    }

    if anger_values.len() < 2 || joy_values.len() < 2 {
        return Err(Error::Statistics(format!(
            "need at least 2 on-edge retweets per emotion (anger: {}, joy: {})",
            anger_values.len(),
            joy_values.len()
        )));
    }

    let anger = sample_stats(&anger_values);
    let joy = sample_stats(&joy_values);
    let welch = match stats::welch_t_test(&anger_values, &joy_values) {
        Ok(w) => w,
        // Two constant samples are a degenerate but well-defined comparison:
        // identical constants are indistinguishable, separated constants are
        // maximally distinguishable.
        Err(Error::Statistics(_)) if anger.mean == joy.mean => WelchResult {
            t: 0.0,
            df: f64::INFINITY,
            p_two_sided: 1.0,
        },
        Err(Error::Statistics(_)) => WelchResult {
            t: if anger.mean > joy.mean {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            df: f64::INFINITY,
            p_two_sided: 0.0,
        },
        Err(e) => return Err(e),
    };

    Ok(EmotionStrengthSummary {
        metric,
        anger,
        joy,
        welch,
        skipped_non_edges,
        anger_sample: anger_values,
        joy_sample: joy_values,
    })
}
