//! Real communication-burst analysis: dominant-emotion labeling, hourly
//! cumulative curves, and per-group velocity aggregation.
//!
//! Events arrive pre-segmented (one id per event). An event's dominant
//! emotion is the one holding strictly more than the threshold share of its
//! emotional (non-`none`) tweets. Velocity comes from burst markers on the
//! hourly cumulative curve, normalized by peak volume; events without
//! detectable markers are carried along but excluded from group means.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::burst::{self, BurstMarkers};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::Emotion;
use crate::stats::{self, WelchResult};

pub const DEFAULT_DOMINANCE_THRESHOLD: f64 = 0.6;
pub const DEFAULT_EVENT_BIN_WIDTH: i64 = 3600;

/// One pre-segmented communication burst event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub event_id: String,
    /// `(timestamp, emotion)` per tweet.
    pub tweets: Vec<(i64, Emotion)>,
}

/// The emotion holding a strict majority share (`> threshold`) of the
/// event's emotional tweets, if any.
///
/// `none`-labeled tweets are excluded from the denominator. With a threshold
/// below one half several emotions could clear it; the unique most frequent
/// one wins, and a tied maximum yields `None`.
pub fn dominant_emotion(event: &EventRecord, threshold: f64) -> Option<Emotion> {
    let mut counts = [0usize; 4];
    let candidates = [
        Emotion::Joy,
        Emotion::Anger,
        Emotion::Disgust,
        Emotion::Sadness,
    ];
    for &(_, emotion) in &event.tweets {
        if let Some(k) = candidates.iter().position(|&e| e == emotion) {
            counts[k] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return None;
    }
    let best = *counts.iter().max().unwrap();
    if counts.iter().filter(|&&c| c == best).count() > 1 {
        return None;
    }
    let k = counts.iter().position(|&c| c == best).unwrap();
    if counts[k] as f64 / total as f64 > threshold {
        Some(candidates[k])
    } else {
        None
    }
}

/// Knobs for [`analyze_event`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EventOptions {
    pub threshold: f64,
    /// Curve bin width in seconds.
    pub bin_width: i64,
    /// Bin every tweet instead of only emotional ones.
    pub count_all_tweets: bool,
}

impl Default for EventOptions {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_DOMINANCE_THRESHOLD,
            bin_width: DEFAULT_EVENT_BIN_WIDTH,
            count_all_tweets: false,
        }
    }
}

/// Per-event analysis output; `markers` is absent for events with no
/// detectable awakening/peak pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventAnalysis {
    pub event_id: String,
    pub dominant: Option<Emotion>,
    pub markers: Option<BurstMarkers>,
    pub total_tweets: usize,
    pub emotional_tweets: usize,
}

impl EventAnalysis {
    pub fn normalized_slope(&self) -> Option<f64> {
        self.markers.map(|m| m.normalized_slope)
    }
}

/// Label the event's dominant emotion and measure its spread velocity on the
/// binned cumulative curve. A missing burst is a value, not a failure.
pub fn analyze_event(event: &EventRecord, opts: &EventOptions) -> Result<EventAnalysis> {
    if opts.bin_width <= 0 {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive (got {})",
            opts.bin_width
        )));
    }
    let timestamps: Vec<i64> = event
        .tweets
        .iter()
        .filter(|(_, e)| opts.count_all_tweets || e.is_emotional())
        .map(|&(t, _)| t)
        .collect();
    let markers = if timestamps.is_empty() {
        None
    } else {
        match burst::detect_markers(&burst::cumulative_curve(&timestamps, opts.bin_width)?) {
            Ok(m) => Some(m),
            Err(e) if e.is_no_burst() => None,
            Err(e) => return Err(e),
        }
    };
    Ok(EventAnalysis {
        event_id: event.event_id.clone(),
        dominant: dominant_emotion(event, opts.threshold),
        markers,
        total_tweets: event.tweets.len(),
        emotional_tweets: event
            .tweets
            .iter()
            .filter(|(_, e)| e.is_emotional())
            .count(),
    })
}

/// Analyze a batch of events (in parallel), preserving input order.
pub fn analyze_events(events: &[EventRecord], opts: &EventOptions) -> Result<Vec<EventAnalysis>> {
    exec::map_indexed(events.len(), |k| analyze_event(&events[k], opts))
        .into_iter()
        .collect()
}

/// One dominance group's velocity aggregate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSummary {
    pub events: usize,
    /// Events contributing to the mean (markers present).
    pub with_markers: usize,
    pub mean_normalized_slope: Option<f64>,
}

/// Velocity comparison between anger- and joy-dominated events.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceSummary {
    pub anger: GroupSummary,
    pub joy: GroupSummary,
    /// Dominance counts outside the anger/joy comparison.
    pub disgust_events: usize,
    pub sadness_events: usize,
    pub undominated_events: usize,
    /// Welch test on normalized slopes, when both groups have enough usable
    /// events.
    pub welch: Option<WelchResult>,
    pub warnings: Vec<String>,
}

fn group_summary(slopes: &[f64], events: usize) -> GroupSummary {
    GroupSummary {
        events,
        with_markers: slopes.len(),
        mean_normalized_slope: if slopes.is_empty() {
            None
        } else {
            Some(stats::mean(slopes))
        },
    }
}

/// Group analyses by dominant emotion and compare anger vs joy mean
/// normalized slopes.
pub fn aggregate_by_dominance(analyses: &[EventAnalysis]) -> DominanceSummary {
    let mut anger_slopes = Vec::new();
    let mut joy_slopes = Vec::new();
    let (mut anger_n, mut joy_n) = (0usize, 0usize);
    let (mut disgust_events, mut sadness_events, mut undominated_events) = (0, 0, 0);
    for a in analyses {
        match a.dominant {
            Some(Emotion::Anger) => {
                anger_n += 1;
                if let Some(s) = a.normalized_slope() {
                    anger_slopes.push(s);
                }
            }
            Some(Emotion::Joy) => {
                joy_n += 1;
                if let Some(s) = a.normalized_slope() {
                    joy_slopes.push(s);
                }
            }
            Some(Emotion::Disgust) => disgust_events += 1,
            Some(Emotion::Sadness) => sadness_events += 1,
            Some(Emotion::None) | None => undominated_events += 1,
        }
    }

    let mut warnings = Vec::new();
    for (name, slopes) in [("anger", &anger_slopes), ("joy", &joy_slopes)] {
        if slopes.len() < 2 {
            warnings.push(format!(
                "{name} group has {} usable event(s); too few for a test",
                slopes.len()
            ));
        }
    }
    let welch = if anger_slopes.len() >= 2 && joy_slopes.len() >= 2 {
        match stats::welch_t_test(&anger_slopes, &joy_slopes) {
            Ok(w) => Some(w),
            Err(e) => {
                warnings.push(format!("welch test unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };

    DominanceSummary {
        anger: group_summary(&anger_slopes, anger_n),
        joy: group_summary(&joy_slopes, joy_n),
        disgust_events,
        sadness_events,
        undominated_events,
        welch,
        warnings,
    }
}

/// Parse a `event_id,timestamp,emotion` CSV into events, grouped by id in
/// first-appearance order; tweets are time-sorted within each event.
pub fn load_events_csv<R: BufRead>(reader: R) -> Result<Vec<EventRecord>> {
    let mut order: Vec<String> = Vec::new();
    let mut by_id: std::collections::HashMap<String, Vec<(i64, Emotion)>> =
        std::collections::HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let content = content.trim();
        if content.is_empty() || (lineno == 1 && content.starts_with("event_id,")) {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "expected `event_id,timestamp,emotion`, got {} field(s)",
                    fields.len()
                ),
            });
        }
        let timestamp = crate::graph::parse_timestamp(fields[1]).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let emotion: Emotion = fields[2].parse().map_err(|e: Error| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if !by_id.contains_key(fields[0]) {
            order.push(fields[0].to_owned());
        }
        by_id
            .entry(fields[0].to_owned())
            .or_default()
            .push((timestamp, emotion));
    }
    Ok(order
        .into_iter()
        .map(|id| {
            let mut tweets = by_id.remove(&id).unwrap();
            tweets.sort_by_key(|&(t, _)| t);
            EventRecord {
                event_id: id,
                tweets,
            }
        })
        .collect())
}
