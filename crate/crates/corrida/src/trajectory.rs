//! Per-frame, per-agent 2D positions in meters — the common currency of the
//! simulator, trajectory ingestion, and the analysis pipeline.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::vec2::Vec2;
use crate::AgentId;

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    Simulated,
    Ingested,
}

/// Run provenance carried alongside the frames and written to the sidecar
/// metadata document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub source: DataSource,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config_digest: Option<String>,
    /// Set when the run hit its time budget before every agent finished.
    #[serde(default)]
    pub timeout: bool,
    #[serde(default)]
    pub tick_count: u64,
    /// Passes counted during the run (pairs swapping their along-track
    /// order).
    #[serde(default)]
    pub overtake_events: u64,
    /// Free-form processing notes (applied transforms, warnings).
    #[serde(default)]
    pub notes: Vec<String>,
}

impl RunMetadata {
    pub fn ingested() -> Self {
        RunMetadata {
            source: DataSource::Ingested,
            seed: None,
            config_digest: None,
            timeout: false,
            tick_count: 0,
            overtake_events: 0,
            notes: Vec::new(),
        }
    }
}

/// Positions of the agents visible in one frame.
pub type Frame = BTreeMap<AgentId, Vec2<f64>>;

/// An ordered sequence of frames at a fixed rate. Frame indices are
/// contiguous from zero; an agent absent from a frame's map was not visible
/// that frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDataset {
    pub frame_rate_hz: f64,
    pub frames: Vec<Frame>,
    pub metadata: RunMetadata,
}

impl TrajectoryDataset {
    /// Seconds between consecutive frames.
    pub fn dt(&self) -> f64 {
        1.0 / self.frame_rate_hz
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    /// Every agent id that appears in any frame.
    pub fn agent_ids(&self) -> BTreeSet<AgentId> {
        self.frames
            .iter()
            .flat_map(|f| f.keys().copied())
            .collect()
    }

    pub fn position(&self, frame: usize, id: AgentId) -> Option<Vec2<f64>> {
        self.frames.get(frame).and_then(|f| f.get(&id)).copied()
    }
}
