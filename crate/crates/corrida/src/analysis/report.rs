use serde::{Deserialize, Serialize};

use super::distances::distance_analysis;
use super::fd::{fd_curves, FdPoint};
use super::stats::{
    histogram_pdf, kl_divergence, mean_std, pearson, DistanceDistribution, KlBase,
    DISTANCE_RANGE_M,
};
use super::AnalysisError;
use crate::geometry::{CircuitGeometry, RoiSpec};
use crate::trajectory::TrajectoryDataset;

/// Time-bin width of the fundamental-diagram table, seconds.
pub const FD_TIME_BIN_S: f64 = 10.0;

/// Stats document for one trajectory: personal-distance statistics, the
/// binned distribution, a Gaussian fit, and the fundamental-diagram table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub label: String,
    /// Largest number of agents visible in any one frame.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub population: Option<u32>,
    pub sample_count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub std_distance: Option<f64>,
    /// Gaussian fit of the sampled distances (maximum likelihood: the
    /// sample mean and population standard deviation).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gaussian_mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gaussian_sigma: Option<f64>,
    /// Mean predecessor distance over the whole loop, not just the region.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub full_loop_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub histogram: Option<DistanceDistribution<f64>>,
    /// The raw region samples, in measurement order.
    pub samples: Vec<f64>,
    pub fd_curve: Vec<FdPoint>,
    pub warnings: Vec<String>,
}

/// Run the full statistics pipeline over one dataset.
pub fn build_report(
    dataset: &TrajectoryDataset,
    geometry: &CircuitGeometry<f64>,
    roi: &RoiSpec<f64>,
    bin_count: usize,
    label: &str,
) -> Result<StatsReport, AnalysisError> {
    let analysis = distance_analysis(dataset, geometry, roi);
    let samples: Vec<f64> = analysis.samples.iter().map(|s| s.distance).collect();

    let mut warnings = Vec::new();
    if samples.is_empty() {
        warnings.push("no personal-distance samples (population of one?)".to_string());
    }
    if analysis.frames_skipped > 0 {
        warnings.push(format!(
            "{} frames skipped (fewer than two agents or degenerate positions)",
            analysis.frames_skipped
        ));
    }

    let (mean, std) = match mean_std(&samples) {
        Ok((m, s)) => (Some(m), Some(s)),
        Err(_) => (None, None),
    };
    let histogram = if samples.is_empty() {
        None
    } else {
        Some(histogram_pdf(&samples, bin_count, DISTANCE_RANGE_M)?)
    };

    let population = dataset.frames.iter().map(|f| f.len() as u32).max();
    Ok(StatsReport {
        label: label.to_string(),
        population: population.filter(|&n| n > 0),
        sample_count: samples.len(),
        mean_distance: mean,
        std_distance: std,
        gaussian_mu: mean,
        gaussian_sigma: std,
        full_loop_mean: analysis.full_loop_mean,
        histogram,
        samples,
        fd_curve: fd_curves(dataset, roi, FD_TIME_BIN_S),
        warnings,
    })
}

/// Which population keeps the larger personal distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceVerdict {
    A,
    B,
    Equal,
}

/// One row of the per-density mean table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanRow {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub population: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub full_loop_mean: Option<f64>,
}

/// Comparison of two stats reports over identical histogram bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDoc {
    pub label_a: String,
    pub label_b: String,
    pub mean_table: Vec<MeanRow>,
    pub mean_a: Option<f64>,
    pub mean_b: Option<f64>,
    pub full_loop_mean_a: Option<f64>,
    pub full_loop_mean_b: Option<f64>,
    /// Pearson correlation of the rank-paired samples (both sorted
    /// ascending, truncated to the shorter length).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pearson_rank_paired: Option<f64>,
    pub kl_a_b: f64,
    pub kl_b_a: f64,
    /// Which side keeps the larger mean personal distance.
    pub larger_personal_distance: DistanceVerdict,
    pub warnings: Vec<String>,
}

/// Compare two reports: means, rank-paired Pearson, both KL directions, and
/// the ordering verdict. Requires both reports to carry histograms over the
/// same bin edges.
pub fn compare_reports(
    a: &StatsReport,
    b: &StatsReport,
    kl_base: KlBase,
) -> Result<ComparisonDoc, AnalysisError> {
    let (ha, hb) = match (&a.histogram, &b.histogram) {
        (Some(ha), Some(hb)) => (ha, hb),
        _ => return Err(AnalysisError::EmptySamples),
    };
    let kl_a_b = kl_divergence(ha, hb, kl_base)?;
    let kl_b_a = kl_divergence(hb, ha, kl_base)?;

    let mut warnings = Vec::new();
    let mut xs = a.samples.clone();
    let mut ys = b.samples.clone();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let n = xs.len().min(ys.len());
    let pearson_rank_paired = match pearson(&xs[..n], &ys[..n]) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(format!("rank-paired Pearson unavailable: {e}"));
            None
        }
    };

    let larger_personal_distance = match (a.mean_distance, b.mean_distance) {
        (Some(ma), Some(mb)) if ma > mb => DistanceVerdict::A,
        (Some(ma), Some(mb)) if mb > ma => DistanceVerdict::B,
        _ => DistanceVerdict::Equal,
    };

    let mean_table = vec![
        MeanRow {
            label: a.label.clone(),
            population: a.population,
            mean_distance: a.mean_distance,
            full_loop_mean: a.full_loop_mean,
        },
        MeanRow {
            label: b.label.clone(),
            population: b.population,
            mean_distance: b.mean_distance,
            full_loop_mean: b.full_loop_mean,
        },
    ];

    Ok(ComparisonDoc {
        label_a: a.label.clone(),
        label_b: b.label.clone(),
        mean_table,
        mean_a: a.mean_distance,
        mean_b: b.mean_distance,
        full_loop_mean_a: a.full_loop_mean,
        full_loop_mean_b: b.full_loop_mean,
        pearson_rank_paired,
        kl_a_b,
        kl_b_a,
        larger_personal_distance,
        warnings,
    })
}
