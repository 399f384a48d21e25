use std::collections::{BTreeMap, BTreeSet};

use super::voronoi::{voronoi_adjacency, AdjacencyRelation, VORONOI_PADDING_M};
use super::AnalysisError;
use crate::geometry::{CircuitGeometry, RoiSpec};
use crate::trajectory::TrajectoryDataset;
use crate::{AgentId, Vec2};

/// One personal-distance measurement: the gap from a subject to the agent
/// in front of it, taken in the measurement region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceSample {
    pub frame: u32,
    pub subject: AgentId,
    pub predecessor: AgentId,
    /// Euclidean distance, meters.
    pub distance: f64,
}

/// The agent walking directly in front of `subject`: among its Voronoi
/// neighbors, the one with the smallest positive arc-coordinate gap in the
/// walking direction (wrapping around the loop). `None` when no neighbor
/// sits ahead.
pub fn predecessor(
    subject: AgentId,
    adjacency: &AdjacencyRelation,
    positions: &BTreeMap<AgentId, Vec2<f64>>,
    geometry: &CircuitGeometry<f64>,
) -> Result<Option<AgentId>, AnalysisError> {
    let subject_pos = positions
        .get(&subject)
        .ok_or(AnalysisError::UnknownId(subject))?;
    let l = geometry.centerline_length();
    let subject_arc = geometry.project(*subject_pos).arc;

    let mut best: Option<(f64, AgentId)> = None;
    for neighbor in adjacency.neighbors_of(subject) {
        let Some(pos) = positions.get(&neighbor) else {
            continue;
        };
        let arc = geometry.project(*pos).arc;
        let gap = (arc - subject_arc).rem_euclid(l);
        if gap <= 1e-12 || gap >= l - 1e-12 {
            continue;
        }
        let better = match best {
            None => true,
            Some((bg, bid)) => gap < bg || (gap == bg && neighbor < bid),
        };
        if better {
            best = Some((gap, neighbor));
        }
    }
    Ok(best.map(|(_, id)| id))
}

/// Everything one pass over the frames yields: region-sampled personal
/// distances plus the loop-wide mean predecessor distance (the latter is
/// pinned near `l / N` on a closed loop, and reporting both exposes that).
#[derive(Debug, Clone, Default)]
pub struct DistanceAnalysis {
    pub samples: Vec<DistanceSample>,
    /// Mean predecessor distance over every agent and frame, ignoring the
    /// measurement region.
    pub full_loop_mean: Option<f64>,
    /// Frames skipped because fewer than two agents were visible or the
    /// positions were degenerate.
    pub frames_skipped: u32,
}

/// Walk the dataset frame by frame. A sample is recorded for a
/// (subject, predecessor) pair at the first frame both stand inside the
/// region simultaneously; the pair re-arms once either of them leaves.
pub fn distance_analysis(
    dataset: &TrajectoryDataset,
    geometry: &CircuitGeometry<f64>,
    roi: &RoiSpec<f64>,
) -> DistanceAnalysis {
    let mut out = DistanceAnalysis::default();
    let (lo, hi) = geometry.bounding_box();
    let pad = Vec2::new(VORONOI_PADDING_M, VORONOI_PADDING_M);
    let bbox = (lo - pad, hi + pad);

    let mut in_episode: BTreeSet<(AgentId, AgentId)> = BTreeSet::new();
    let mut loop_sum = 0.0;
    let mut loop_count = 0u64;

    for (frame_idx, frame) in dataset.frames.iter().enumerate() {
        // Episodes re-arm as soon as either member leaves the region (or
        // disappears), independent of the current neighbor relation.
        in_episode.retain(|(a, b)| {
            let a_in = frame.get(a).is_some_and(|p| roi.contains(*p));
            let b_in = frame.get(b).is_some_and(|p| roi.contains(*p));
            a_in && b_in
        });

        if frame.len() < 2 {
            if !frame.is_empty() {
                out.frames_skipped += 1;
            }
            continue;
        }
        let Ok(adjacency) = voronoi_adjacency(frame, bbox) else {
            out.frames_skipped += 1;
            continue;
        };

        for (&subject, &subject_pos) in frame {
            let Ok(Some(pred)) = predecessor(subject, &adjacency, frame, geometry) else {
                continue;
            };
            let pred_pos = frame[&pred];
            let distance = subject_pos.distance(pred_pos);
            loop_sum += distance;
            loop_count += 1;

            if roi.contains(subject_pos) && roi.contains(pred_pos) {
                let key = (subject, pred);
                if in_episode.insert(key) {
                    out.samples.push(DistanceSample {
                        frame: frame_idx as u32,
                        subject,
                        predecessor: pred,
                        distance,
                    });
                }
            }
        }
    }

    if loop_count > 0 {
        out.full_loop_mean = Some(loop_sum / loop_count as f64);
    }
    out
}

/// Just the region-sampled distances, sorted by frame then subject id.
pub fn personal_distances(
    dataset: &TrajectoryDataset,
    geometry: &CircuitGeometry<f64>,
    roi: &RoiSpec<f64>,
) -> Vec<DistanceSample> {
    distance_analysis(dataset, geometry, roi).samples
}
