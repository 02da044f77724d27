//! Distribution comparison and hypothesis-testing primitives.
//!
//! Everything here is a pure function: uniform histograms over `[0, 1]`,
//! Bernoulli distributions, KL divergence with additive smoothing, the exact
//! one-dimensional Wasserstein distance via CDFs, and Welch's unequal-variance
//! t-test with the two-sided p-value computed through the regularized
//! incomplete beta function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which divergence to minimize when fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergenceKind {
    Kl,
    Wasserstein,
}

impl std::fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DivergenceKind::Kl => f.write_str("kl"),
            DivergenceKind::Wasserstein => f.write_str("wasserstein"),
        }
    }
}

impl std::str::FromStr for DivergenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kl" => Ok(DivergenceKind::Kl),
            "wasserstein" => Ok(DivergenceKind::Wasserstein),
            other => Err(Error::InvalidArgument(format!(
                "unknown divergence {other:?} (expected kl or wasserstein)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistributionKind {
    /// Uniform bins over `[0, 1]`, last bin right-closed.
    Histogram { bins: usize },
    /// Two-point distribution on `{0, 1}`.
    Bernoulli,
}

/// A probability mass vector with its support description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    kind: DistributionKind,
    masses: Vec<f64>,
    sample_size: usize,
}

impl Distribution {
    /// Histogram of a sample of values in `[0, 1]`.
    ///
    /// Bin `i` covers `[i/bins, (i+1)/bins)`; the last bin also includes 1.
    pub fn histogram(sample: &[f64], bins: usize) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InvalidArgument("empty sample for histogram".into()));
        }
        if bins < 2 {
            return Err(Error::InvalidArgument(format!(
                "histogram needs at least 2 bins (got {bins})"
            )));
        }
        let mut counts = vec![0u64; bins];
        for &v in sample {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "histogram value {v} outside [0, 1]"
                )));
            }
            let idx = ((v * bins as f64) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        let n = sample.len() as f64;
        Ok(Self {
            kind: DistributionKind::Histogram { bins },
            masses: counts.iter().map(|&c| c as f64 / n).collect(),
            sample_size: sample.len(),
        })
    }

    /// Bernoulli distribution with success probability `p`.
    pub fn bernoulli(p: f64, sample_size: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "bernoulli parameter {p} outside [0, 1]"
            )));
        }
        Ok(Self {
            kind: DistributionKind::Bernoulli,
            masses: vec![1.0 - p, p],
            sample_size,
        })
    }

    /// Bernoulli distribution estimated from a 0/1 indicator sample.
    pub fn from_indicators(sample: &[bool]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InvalidArgument(
                "empty sample for bernoulli fit".into(),
            ));
        }
        let ones = sample.iter().filter(|&&b| b).count();
        Self::bernoulli(ones as f64 / sample.len() as f64, sample.len())
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    /// Distance between adjacent support points.
    fn spacing(&self) -> f64 {
        match self.kind {
            DistributionKind::Histogram { bins } => 1.0 / bins as f64,
            DistributionKind::Bernoulli => 1.0,
        }
    }

    fn check_same_support(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::InvalidArgument(format!(
                "mismatched distribution supports: {:?} vs {:?}",
                self.kind, other.kind
            )));
        }
        Ok(())
    }
}

/// KL divergence `sum p ln(p/q)` in nats, after additive-epsilon smoothing.
///
/// Smoothing adds `epsilon` to every mass of both distributions and
/// renormalizes; with `epsilon = 0` an empty `q` bin under positive `p` mass
/// yields infinity.
pub fn kl_divergence(p: &Distribution, q: &Distribution, epsilon: f64) -> Result<f64> {
    p.check_same_support(q)?;
    if epsilon < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "negative smoothing epsilon {epsilon}"
        )));
    }
    let bins = p.masses.len() as f64;
    let norm = 1.0 + bins * epsilon;
    let mut sum = 0.0;
    for (&pm, &qm) in p.masses.iter().zip(&q.masses) {
        let ps = (pm + epsilon) / norm;
        let qs = (qm + epsilon) / norm;
        if ps > 0.0 {
            if qs == 0.0 {
                return Ok(f64::INFINITY);
            }
            sum += ps * (ps / qs).ln();
        }
    }
    // Guard tiny negative round-off; KL is non-negative.
    Ok(sum.max(0.0))
}

/// Exact first Wasserstein distance between two distributions on the same
/// support: `sum |CDF_p(i) - CDF_q(i)| * dx`.
pub fn wasserstein_1d(p: &Distribution, q: &Distribution) -> Result<f64> {
    p.check_same_support(q)?;
    let dx = p.spacing();
    let mut cdf_p = 0.0;
    let mut cdf_q = 0.0;
    let mut sum = 0.0;
    for (&pm, &qm) in p.masses.iter().zip(&q.masses) {
        cdf_p += pm;
        cdf_q += qm;
        sum += (cdf_p - cdf_q).abs();
    }
    Ok(sum * dx)
}

/// Outcome of Welch's two-sample t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchResult {
    pub t: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    pub p_two_sided: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (n - 1 denominator).
pub fn sample_variance(xs: &[f64], mean: f64) -> f64 {
    xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Welch's unequal-variance two-sample t-test, two-sided.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Statistics(format!(
            "welch test needs at least 2 observations per sample (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (sample_variance(a, ma), sample_variance(b, mb));
    if va == 0.0 && vb == 0.0 {
        return Err(Error::Statistics(
            "welch test undefined: both samples have zero variance".into(),
        ));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let sa = va / na;
    let sb = vb / nb;
    let t = (ma - mb) / (sa + sb).sqrt();
    let df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p_two_sided = student_t_two_sided_p(t, df);
    Ok(WelchResult { t, df, p_two_sided })
}

/// Two-sided p-value for a t statistic with `df` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    // P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2)
    regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// CDF of Student's t distribution.
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    let half_p = 0.5 * student_t_two_sided_p(t, df);
    if t < 0.0 {
        half_p
    } else {
        1.0 - half_p
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Continued-fraction evaluation (Lentz), accurate to ~1e-14 over the
/// parameter ranges used here.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Natural log of the gamma function (Lanczos approximation, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
