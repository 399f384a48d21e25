use crate::trajectory::TrajectoryDataset;
use crate::{AgentId, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Frame-to-frame displacement exceeded `max_speed * dt`.
    SpeedExceeded,
    NonFinite,
    OutOfRegion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub frame: u32,
    pub agent: AgentId,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Flag physically implausible content: per-agent teleports faster than
/// `max_speed`, non-finite coordinates, and positions outside an optional
/// bounding region. Never mutates the data.
pub fn validate(
    dataset: &TrajectoryDataset,
    max_speed: f64,
    region: Option<(Vec2<f64>, Vec2<f64>)>,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let dt = dataset.dt();

    for (frame_idx, frame) in dataset.frames.iter().enumerate() {
        for (&agent, &pos) in frame {
            if !pos.is_finite() {
                report.violations.push(Violation {
                    kind: ViolationKind::NonFinite,
                    frame: frame_idx as u32,
                    agent,
                    detail: format!("position ({}, {})", pos.x, pos.y),
                });
                continue;
            }
            if let Some((lo, hi)) = region {
                if pos.x < lo.x || pos.x > hi.x || pos.y < lo.y || pos.y > hi.y {
                    report.violations.push(Violation {
                        kind: ViolationKind::OutOfRegion,
                        frame: frame_idx as u32,
                        agent,
                        detail: format!("position ({}, {})", pos.x, pos.y),
                    });
                }
            }
            if frame_idx > 0 {
                if let Some(prev) = dataset.frames[frame_idx - 1].get(&agent) {
                    if prev.is_finite() {
                        let step = pos.distance(*prev);
                        if step > max_speed * dt {
                            report.violations.push(Violation {
                                kind: ViolationKind::SpeedExceeded,
                                frame: frame_idx as u32,
                                agent,
                                detail: format!(
                                    "moved {step:.3} m in one frame (limit {:.3})",
                                    max_speed * dt
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    report
}
