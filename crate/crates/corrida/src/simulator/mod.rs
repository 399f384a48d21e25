//! Marker-based stepping engine. Ground markers are scattered once per run;
//! every tick each marker is claimed by the closest agent within perception
//! range, and each agent walks toward its next anticlockwise goal with a
//! velocity built from the markers it owns. Crowding starves an agent of
//! forward markers, which is what produces jams.
//!
//! The engine is fully deterministic: the only randomness is the marker
//! placement, which is a pure function of the configured seed.

mod config;
mod engine;
mod markers;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::personality::PersonalityError;

pub use config::{GroupConfig, ProfileAssignment, SimConfig};
pub use engine::{
    apply_turn_limit, enforce_cohesion, motion_vector, run, AgentState, Simulation, EXIT_MARGIN,
    GOAL_RADIUS,
};
pub use markers::{assign_markers, seed_markers, MarkerField};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("marker field is empty; agents cannot move")]
    NoMarkers,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Personality(#[from] PersonalityError),
}
