use serde::{Deserialize, Serialize};

use super::SimError;
use crate::geometry::{build_circuit, CircuitGeometry, RoiSpec};
use crate::personality::{OceanProfile, ProxemicsConstants};
use crate::{AgentId, Vec2};

/// How agents get their personality profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileAssignment {
    /// Every agent shares one profile.
    Uniform(OceanProfile),
    /// One profile per agent, in agent-id order.
    PerAgent(Vec<OceanProfile>),
}

impl ProfileAssignment {
    pub fn profile_for(&self, slot: usize) -> &OceanProfile {
        match self {
            ProfileAssignment::Uniform(p) => p,
            ProfileAssignment::PerAgent(ps) => &ps[slot],
        }
    }
}

/// One group in the population partition. Cohesion defaults to the scaled
/// mean collectivity of the members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupConfig {
    pub members: Vec<AgentId>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cohesion: Option<f64>,
}

/// Full description of one reproducible run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub population: u32,
    /// Seconds per tick.
    pub dt: f64,
    /// Wall-clock budget of the run, seconds.
    pub duration: f64,
    /// Markers per square meter.
    pub marker_density: f64,
    /// Agent perception radius, meters.
    pub marker_radius: f64,
    /// Physical speed scale, meters/second; an agent's top speed is its
    /// speed factor times this.
    pub mean_walk_speed: f64,
    /// Physical turn-rate scale, radians/second.
    pub max_turn_rate: f64,
    pub rng_seed: u64,
    pub laps_to_walk: u32,
    pub corridor_length: f64,
    pub corridor_width: f64,
    pub straight_fraction: f64,
    /// Length of the measurement rectangle along the first straight, meters.
    pub roi_length: f64,
    pub profiles: ProfileAssignment,
    pub groups: Vec<GroupConfig>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            population: 1,
            dt: 1.0 / 30.0,
            duration: 300.0,
            marker_density: 450.0,
            marker_radius: 1.0,
            mean_walk_speed: 1.34,
            max_turn_rate: std::f64::consts::PI,
            rng_seed: 1,
            laps_to_walk: 2,
            corridor_length: 17.3,
            corridor_width: 0.8,
            straight_fraction: 0.6,
            roi_length: 2.0,
            profiles: ProfileAssignment::Uniform(OceanProfile::germany()),
            groups: Vec::new(),
        }
    }
}

impl SimConfig {
    pub fn for_population(population: u32, profile: OceanProfile) -> Self {
        SimConfig {
            population,
            profiles: ProfileAssignment::Uniform(profile),
            ..SimConfig::default()
        }
    }

    /// Build the circuit this config describes, with its measurement region.
    pub fn build_geometry(&self) -> Result<CircuitGeometry<f64>, SimError> {
        let mut circuit = build_circuit(
            self.corridor_length,
            self.corridor_width,
            self.straight_fraction,
        )?;
        circuit.roi = RoiSpec {
            center: Vec2::new(0.0, -circuit.arc_radius()),
            length_along_track: self.roi_length,
            width: self.corridor_width,
        };
        Ok(circuit)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.population < 1 {
            return fail(format!("population must be >= 1, got {}", self.population));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return fail(format!("dt must be positive, got {}", self.dt));
        }
        if !self.duration.is_finite() || self.duration <= 0.0 {
            return fail(format!("duration must be positive, got {}", self.duration));
        }
        if !self.marker_density.is_finite() || self.marker_density <= 0.0 {
            return fail(format!(
                "marker_density must be positive, got {}",
                self.marker_density
            ));
        }
        if !self.marker_radius.is_finite() || self.marker_radius <= 0.0 {
            return fail(format!(
                "marker_radius must be positive, got {}",
                self.marker_radius
            ));
        }
        if !self.mean_walk_speed.is_finite() || self.mean_walk_speed <= 0.0 {
            return fail(format!(
                "mean_walk_speed must be positive, got {}",
                self.mean_walk_speed
            ));
        }
        if !self.max_turn_rate.is_finite() || self.max_turn_rate <= 0.0 {
            return fail(format!(
                "max_turn_rate must be positive, got {}",
                self.max_turn_rate
            ));
        }
        if self.laps_to_walk < 1 {
            return fail(format!(
                "laps_to_walk must be >= 1, got {}",
                self.laps_to_walk
            ));
        }
        let circuit = self.build_geometry()?;
        // The measurement region must fit inside the walkable band.
        let roi = circuit.roi;
        for i in 0..=16 {
            for j in [0.0, 0.5, 1.0] {
                let p = Vec2::new(
                    roi.center.x - roi.length_along_track / 2.0
                        + roi.length_along_track * i as f64 / 16.0,
                    roi.center.y - roi.width / 2.0 + roi.width * j,
                );
                if circuit.lateral_distance(p) > self.corridor_width / 2.0 + 1e-9 {
                    return fail(format!(
                        "roi_length {} does not fit inside the corridor band",
                        self.roi_length
                    ));
                }
            }
        }
        if let ProfileAssignment::PerAgent(ps) = &self.profiles {
            if ps.len() != self.population as usize {
                return fail(format!(
                    "profiles: expected {} per-agent profiles, got {}",
                    self.population,
                    ps.len()
                ));
            }
        }
        let mut seen = vec![false; self.population as usize + 1];
        let constants = ProxemicsConstants::<f64>::default();
        for (gi, group) in self.groups.iter().enumerate() {
            if group.members.is_empty() {
                return fail(format!("groups[{gi}] has no members"));
            }
            for &id in &group.members {
                if id == 0 || id > self.population {
                    return fail(format!("groups[{gi}] references unknown agent {id}"));
                }
                if seen[id as usize] {
                    return fail(format!("agent {id} appears in more than one group"));
                }
                seen[id as usize] = true;
            }
            if let Some(z) = group.cohesion {
                if !(0.0..=constants.max_cohesion).contains(&z) {
                    return fail(format!("groups[{gi}] cohesion {z} outside [0, 3]"));
                }
            }
        }
        Ok(())
    }

    /// Deterministic digest of the full config, for run provenance.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        // FNV-1a, 64-bit.
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in json.as_bytes() {
            hash ^= u64::from(*byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}
