//! Deterministic single-file corridor loop simulator and personal-distance
//! statistics toolkit.
//!
//! Agents walk a closed oval corridor anticlockwise, steered by a
//! marker-claiming scheme and parameterized from big-five (OCEAN)
//! personality profiles. The analysis side extracts predecessor distances
//! from trajectories (simulated or ingested), builds distance distributions,
//! and compares populations via means, Pearson correlation, and
//! Kullback-Leibler divergence.
//!
//! The numeric core is generic over the scalar type (see [`Scalar`]); every
//! public type defaults to `f64`, which is also the interchange precision of
//! the trajectory CSV format.

pub mod analysis;
pub mod geometry;
pub mod ingest;
pub mod personality;
mod scalar;
pub mod simulator;
pub mod trajectory;
mod vec2;

pub use scalar::Scalar;
pub use vec2::Vec2;

/// Identifier of one agent; trajectory files require them to be positive.
pub type AgentId = u32;

/// The concrete scalar used by the simulator and all file formats.
pub type Real = f64;

/// A 2D point in the concrete interchange precision.
pub type Point = Vec2<Real>;
