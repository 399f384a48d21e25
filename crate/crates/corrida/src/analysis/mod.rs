//! Statistics pipeline over trajectory datasets: Voronoi neighbor relation,
//! predecessor personal distances sampled in the measurement region,
//! distribution comparison (means, Pearson, binned PDFs, Kullback-Leibler
//! divergence), and fundamental-diagram curves.

mod distances;
mod fd;
mod report;
mod stats;
mod voronoi;

use thiserror::Error;

pub use distances::{
    distance_analysis, personal_distances, predecessor, DistanceAnalysis, DistanceSample,
};
pub use fd::{fd_curves, mean_roi_speed, FdPoint};
pub use report::{
    build_report, compare_reports, ComparisonDoc, DistanceVerdict, MeanRow, StatsReport,
    FD_TIME_BIN_S,
};
pub use stats::{
    histogram_pdf, kl_divergence, mean_std, pearson, DistanceDistribution, KlBase,
    DEFAULT_BIN_COUNT, DISTANCE_RANGE_M,
};
pub use voronoi::{voronoi_adjacency, AdjacencyRelation, VORONOI_PADDING_M};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("no samples")]
    EmptySamples,
    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("histogram bins do not match")]
    BinMismatch,
    #[error("duplicate points in Voronoi input")]
    DuplicatePoints,
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("unknown agent id {0}")]
    UnknownId(u32),
    #[error("bin count must be >= 1")]
    InvalidBinCount,
}
