use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::scalar::{num, Scalar};

/// Default histogram resolution: 25 bins over [0, 2.5] m, 0.1 m per bin.
pub const DEFAULT_BIN_COUNT: usize = 25;
/// Personal distances are binned over this range, meters.
pub const DISTANCE_RANGE_M: (f64, f64) = (0.0, 2.5);

/// Smoothing mass added to every bin before a KL evaluation so empty bins
/// never produce infinities.
const KL_EPSILON: f64 = 1e-10;

/// Arithmetic mean and population standard deviation.
pub fn mean_std<S: Scalar>(samples: &[S]) -> Result<(S, S), AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::EmptySamples);
    }
    let n = num::<S>(samples.len() as f64);
    let mean = samples.iter().copied().sum::<S>() / n;
    let var = samples
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .sum::<S>()
        / n;
    Ok((mean, var.sqrt()))
}

/// Binned probability distribution of personal distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceDistribution<S = f64> {
    /// Strictly increasing, `bin_count + 1` entries.
    pub bin_edges: Vec<S>,
    /// Non-negative, summing to one.
    pub probabilities: Vec<S>,
}

/// Histogram the samples into `bin_count` equal bins over `range` and
/// normalize. Samples outside the range are clipped into the nearest edge
/// bin so probability mass is conserved.
pub fn histogram_pdf<S: Scalar>(
    samples: &[S],
    bin_count: usize,
    range: (S, S),
) -> Result<DistanceDistribution<S>, AnalysisError> {
    if bin_count < 1 {
        return Err(AnalysisError::InvalidBinCount);
    }
    if samples.is_empty() {
        return Err(AnalysisError::EmptySamples);
    }
    let (lo, hi) = range;
    let width = (hi - lo) / num::<S>(bin_count as f64);
    let mut counts = vec![0u64; bin_count];
    for &x in samples {
        let idx = ((x - lo) / width).floor();
        let idx = idx
            .to_f64()
            .map(|i| (i as i64).clamp(0, bin_count as i64 - 1) as usize)
            .unwrap_or(0);
        counts[idx] += 1;
    }
    let total = num::<S>(samples.len() as f64);
    let probabilities = counts
        .iter()
        .map(|&c| num::<S>(c as f64) / total)
        .collect();
    let bin_edges = (0..=bin_count)
        .map(|i| lo + width * num::<S>(i as f64))
        .collect();
    Ok(DistanceDistribution {
        bin_edges,
        probabilities,
    })
}

/// Pearson correlation coefficient of two equally long sequences.
pub fn pearson<S: Scalar>(x: &[S], y: &[S]) -> Result<S, AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(AnalysisError::LengthMismatch {
            left: x.len(),
            right: 2,
        });
    }
    let n = num::<S>(x.len() as f64);
    let mx = x.iter().copied().sum::<S>() / n;
    let my = y.iter().copied().sum::<S>() / n;
    let mut cov = S::zero();
    let mut vx = S::zero();
    let mut vy = S::zero();
    for (&a, &b) in x.iter().zip(y) {
        cov = cov + (a - mx) * (b - my);
        vx = vx + (a - mx) * (a - mx);
        vy = vy + (b - my) * (b - my);
    }
    if vx == S::zero() {
        return Err(AnalysisError::ZeroVariance("x"));
    }
    if vy == S::zero() {
        return Err(AnalysisError::ZeroVariance("y"));
    }
    Ok(cov / (vx.sqrt() * vy.sqrt()))
}

/// Logarithm base for KL divergences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlBase {
    /// Natural log; result in nats.
    Nats,
    /// Log base 2; result in bits.
    Bits,
}

/// `D(P || Q)` over identically binned distributions. Both sides are
/// epsilon-smoothed and renormalized first, so empty bins stay finite.
pub fn kl_divergence<S: Scalar>(
    p: &DistanceDistribution<S>,
    q: &DistanceDistribution<S>,
    base: KlBase,
) -> Result<S, AnalysisError> {
    if p.bin_edges.len() != q.bin_edges.len()
        || p.bin_edges
            .iter()
            .zip(&q.bin_edges)
            .any(|(a, b)| a != b)
    {
        return Err(AnalysisError::BinMismatch);
    }
    let ps = smooth(&p.probabilities);
    let qs = smooth(&q.probabilities);
    let mut sum = S::zero();
    for (pi, qi) in ps.iter().zip(&qs) {
        sum = sum + *pi * (*pi / *qi).ln();
    }
    Ok(match base {
        KlBase::Nats => sum,
        KlBase::Bits => sum / S::LN_2(),
    })
}

fn smooth<S: Scalar>(probs: &[S]) -> Vec<S> {
    let eps = num::<S>(KL_EPSILON);
    let total = probs.iter().copied().sum::<S>() + eps * num::<S>(probs.len() as f64);
    probs.iter().map(|&p| (p + eps) / total).collect()
}
