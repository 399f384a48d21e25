//! Trajectory file ingestion: the trajectory CSV format, coordinate
//! transforms, and physical-plausibility validation. Simulated and ingested
//! data flow through the same [`TrajectoryDataset`] type so the analysis
//! side never knows the difference.
//!
//! # Trajectory CSV
//!
//! ```text
//! frame,agent_id,x_m,y_m
//! 0,1,0.5,0.25
//! ```
//!
//! `frame` is a 0-based integer, `agent_id` a positive integer, coordinates
//! are decimal meters with up to 9 fractional digits. Rows are sorted by
//! frame then agent id; UTF-8 with LF line endings. A missing (frame, id)
//! cell means the agent was not visible that frame. The frame rate travels
//! in a sidecar metadata document (key `frame_rate_hz`).

mod csv;
mod transform;
mod validate;

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trajectory::{RunMetadata, TrajectoryDataset};

pub use csv::{emit_trajectories, format_coord, parse_trajectories, quantize_coord};
pub use transform::{apply_transform, AffineTransform2D};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

/// Default frame rate assumed when no sidecar document is available.
pub const DEFAULT_FRAME_RATE_HZ: f64 = 30.0;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("non-monotone frame index at line {line}")]
    NonMonotoneFrames { line: usize },
    #[error("duplicate cell for frame {frame}, agent {agent}")]
    DuplicateCell { frame: u32, agent: u32 },
    #[error("transform is singular (|det| too small)")]
    SingularTransform,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Sidecar metadata document accompanying a trajectory CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarMeta {
    pub frame_rate_hz: f64,
    #[serde(flatten)]
    pub run: RunMetadata,
}

impl SidecarMeta {
    pub fn for_dataset(dataset: &TrajectoryDataset) -> Self {
        SidecarMeta {
            frame_rate_hz: dataset.frame_rate_hz,
            run: dataset.metadata.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        serde_json::from_str(text).map_err(|e| IngestError::ParseError {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}
