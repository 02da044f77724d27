//! Cumulative-curve construction and parameterless burst-marker detection.
//!
//! Markers come from the reference-line construction: connect the first and
//! last points of the cumulative curve with a line `L`, then the peak is the
//! point farthest from `L` among points strictly above it and the awakening
//! the farthest among points strictly below it. Spread velocity is the slope
//! between the two markers; the normalized slope divides by the peak volume.
//!
//! Comparisons use the cross product `dx*(y - y0) - dy*(x - x0)`, whose sign
//! and argmax agree with both the perpendicular and the vertical distance to
//! `L` (they differ from the cross product by positive per-curve factors).
//! On integer-count curves this makes "strictly above/below" exact.

use serde::{Deserialize, Serialize};

use crate::diffusion::DiffusionTrace;
use crate::error::{Error, Result};

/// Cumulative counts over uniform time bins; `x` is the bin index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativeCurve {
    ys: Vec<f64>,
    bin_width: f64,
    /// Timestamp at which bin 0 starts (0 for step-indexed curves).
    origin: i64,
}

impl CumulativeCurve {
    /// Wrap an already-cumulative series (non-negative, non-decreasing).
    pub fn from_cumulative(ys: Vec<f64>, bin_width: f64, origin: i64) -> Result<Self> {
        if ys.is_empty() {
            return Err(Error::InvalidArgument("empty cumulative curve".into()));
        }
        if !(bin_width > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "bin width must be positive (got {bin_width})"
            )));
        }
        if ys[0] < 0.0 || ys.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument(
                "cumulative curve must be non-negative and non-decreasing".into(),
            ));
        }
        Ok(Self {
            ys,
            bin_width,
            origin,
        })
    }

    /// Cumulative-sum per-bin counts.
    pub fn from_counts(counts: &[u64], bin_width: f64, origin: i64) -> Result<Self> {
        let mut total = 0u64;
        let ys = counts
            .iter()
            .map(|&c| {
                total += c;
                total as f64
            })
            .collect();
        Self::from_cumulative(ys, bin_width, origin)
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    /// `(x, y)` of bin `i`, with `x` the bin index.
    pub fn point(&self, i: usize) -> (f64, f64) {
        (i as f64, self.ys[i])
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }
}

/// Bin timestamps from their minimum to their maximum (inclusive) and
/// cumulatively sum; interior empty bins carry the running total forward.
pub fn cumulative_curve(timestamps: &[i64], bin_width: i64) -> Result<CumulativeCurve> {
    if timestamps.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot bin an empty timestamp list".into(),
        ));
    }
    if bin_width <= 0 {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive (got {bin_width})"
        )));
    }
    let t_min = *timestamps.iter().min().unwrap();
    let t_max = *timestamps.iter().max().unwrap();
    let bins = ((t_max - t_min) / bin_width) as usize + 1;
    let mut counts = vec![0u64; bins];
    for &t in timestamps {
        counts[((t - t_min) / bin_width) as usize] += 1;
    }
    CumulativeCurve::from_counts(&counts, bin_width as f64, t_min)
}

/// Awakening and peak coordinates on a cumulative curve, with the slope
/// between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstMarkers {
    pub x_awakening: f64,
    pub y_awakening: f64,
    pub x_peak: f64,
    pub y_peak: f64,
    /// `(y_peak - y_awakening) / (x_peak - x_awakening)`, in counts per bin.
    pub slope: f64,
    /// Slope divided by the peak volume.
    pub normalized_slope: f64,
}

/// Locate awakening and peak on a cumulative curve.
///
/// Fails with [`Error::NoBurst`] when no point lies strictly above or none
/// strictly below the first-to-last reference line (e.g. a straight-line
/// curve), or when the detected awakening does not precede the peak. Ties
/// break toward the earliest bin.
pub fn detect_markers(curve: &CumulativeCurve) -> Result<BurstMarkers> {
    let n = curve.len();
    if n < 3 {
        return Err(Error::NoBurst("curve has fewer than 3 points"));
    }
    let (x0, y0) = curve.point(0);
    let (x1, y1) = curve.point(n - 1);
    let dx = x1 - x0;
    let dy = y1 - y0;

    // cross > 0 above L, < 0 below; magnitude proportional to distance.
    let mut peak: Option<(usize, f64)> = None;
    let mut awakening: Option<(usize, f64)> = None;
    for i in 0..n {
        let (x, y) = curve.point(i);
        let cross = dx * (y - y0) - dy * (x - x0);
        if cross > 0.0 && peak.map_or(true, |(_, best)| cross > best) {
            peak = Some((i, cross));
        }
        if cross < 0.0 && awakening.map_or(true, |(_, best)| cross < best) {
            awakening = Some((i, cross));
        }
    }
    let Some((peak_idx, _)) = peak else {
        return Err(Error::NoBurst("no point strictly above the reference line"));
    };
    let Some((awakening_idx, _)) = awakening else {
        return Err(Error::NoBurst("no point strictly below the reference line"));
    };
    if awakening_idx >= peak_idx {
        return Err(Error::NoBurst("awakening does not precede the peak"));
    }

    let (x_awakening, y_awakening) = curve.point(awakening_idx);
    let (x_peak, y_peak) = curve.point(peak_idx);
    let slope = (y_peak - y_awakening) / (x_peak - x_awakening);
    Ok(BurstMarkers {
        x_awakening,
        y_awakening,
        x_peak,
        y_peak,
        slope,
        normalized_slope: slope / y_peak,
    })
}

/// Spread velocity of one simulation run: markers on its per-step cumulative
/// infected curve (one bin per step).
pub fn trace_velocity(trace: &DiffusionTrace) -> Result<BurstMarkers> {
    let counts = trace.cumulative_counts();
    let curve = CumulativeCurve::from_cumulative(
        counts.iter().map(|&c| c as f64).collect(),
        1.0,
        0,
    )?;
    detect_markers(&curve)
}
