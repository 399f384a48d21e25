use serde::{Deserialize, Serialize};

use crate::geometry::RoiSpec;
use crate::trajectory::TrajectoryDataset;
use crate::{AgentId, Vec2};

/// One time bin of the fundamental diagram: density and speed measured in
/// the region, flow as their product through the region's cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdPoint {
    pub bin_index: u32,
    /// Persons per square meter.
    pub density: f64,
    /// Meters per second.
    pub mean_speed: f64,
    /// Persons per second through the cross-section:
    /// `density * mean_speed * roi.width`.
    pub flow: f64,
}

/// Instantaneous speed of an agent at a frame by finite differences:
/// central where both neighbor frames have the agent, one-sided at the ends
/// of its presence runs.
fn instantaneous_speed(
    dataset: &TrajectoryDataset,
    frame: usize,
    id: AgentId,
    pos: Vec2<f64>,
) -> Option<f64> {
    let dt = dataset.dt();
    let before = frame
        .checked_sub(1)
        .and_then(|f| dataset.position(f, id));
    let after = dataset.position(frame + 1, id);
    match (before, after) {
        (Some(b), Some(a)) => Some(a.distance(b) / (2.0 * dt)),
        (None, Some(a)) => Some(a.distance(pos) / dt),
        (Some(b), None) => Some(pos.distance(b) / dt),
        (None, None) => None,
    }
}

/// Fundamental-diagram curve: one point per `time_bin_s` of data. Bins with
/// an empty region yield zero density, speed, and flow.
pub fn fd_curves(
    dataset: &TrajectoryDataset,
    roi: &RoiSpec<f64>,
    time_bin_s: f64,
) -> Vec<FdPoint> {
    let frames_per_bin = ((time_bin_s * dataset.frame_rate_hz).round() as usize).max(1);
    let area = roi.area();
    let mut points = Vec::new();

    for (bin_index, chunk) in dataset.frames.chunks(frames_per_bin).enumerate() {
        let mut occupancy = 0u64;
        let mut speed_sum = 0.0;
        let mut speed_samples = 0u64;
        for (offset, frame) in chunk.iter().enumerate() {
            let frame_idx = bin_index * frames_per_bin + offset;
            for (&id, &pos) in frame {
                if !roi.contains(pos) {
                    continue;
                }
                occupancy += 1;
                if let Some(v) = instantaneous_speed(dataset, frame_idx, id, pos) {
                    speed_sum += v;
                    speed_samples += 1;
                }
            }
        }
        let density = occupancy as f64 / (chunk.len() as f64 * area);
        let mean_speed = if speed_samples > 0 {
            speed_sum / speed_samples as f64
        } else {
            0.0
        };
        points.push(FdPoint {
            bin_index: bin_index as u32,
            density,
            mean_speed,
            flow: density * mean_speed * roi.width,
        });
    }
    points
}

/// Mean instantaneous speed over every (agent, frame) observation inside
/// the region, or `None` if the region is never visited.
pub fn mean_roi_speed(dataset: &TrajectoryDataset, roi: &RoiSpec<f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0u64;
    for (frame_idx, frame) in dataset.frames.iter().enumerate() {
        for (&id, &pos) in frame {
            if roi.contains(pos) {
                if let Some(v) = instantaneous_speed(dataset, frame_idx, id, pos) {
                    sum += v;
                    count += 1;
                }
            }
        }
    }
    (count > 0).then(|| sum / count as f64)
}
