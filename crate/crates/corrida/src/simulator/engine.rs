use super::markers::{seed_markers, MarkerField};
use super::{SimConfig, SimError};
use crate::geometry::CircuitGeometry;
use crate::ingest::quantize_coord;
use crate::personality::{
    cohesion_distance, derive_traits, group_cohesion, AgentTraits, ProxemicsConstants,
};
use crate::trajectory::{DataSource, Frame, RunMetadata, TrajectoryDataset};
use crate::{AgentId, Vec2};

/// An agent switches to its next goal when this close to the current one,
/// meters.
pub const GOAL_RADIUS: f64 = 0.3;
/// After the final lap an agent keeps walking and drops out this far past
/// the start line, meters.
pub const EXIT_MARGIN: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct AgentState {
    pub id: AgentId,
    pub position: Vec2<f64>,
    /// Unit walking direction.
    pub heading: Vec2<f64>,
    pub goal_index: usize,
    pub traits: AgentTraits<f64>,
    pub group_id: Option<usize>,
    pub laps_completed: u32,
    pub active: bool,
    /// Top speed, meters/second: speed factor times the physical scale.
    pub speed_phys: f64,
    /// Turn-rate cap, radians/second.
    pub turn_rate_phys: f64,
    /// Arc coordinate after the last step, for lap counting.
    arc: f64,
}

/// Velocity an agent wants from the markers it owns: markers aligned with
/// the goal direction and close by weigh most, and the weighted mean offset
/// is normalized by the farthest owned marker so the magnitude never exceeds
/// the agent's top speed. No markers means no movement.
pub fn motion_vector(
    agent: &AgentState,
    owned_markers: &[Vec2<f64>],
    goal_point: Vec2<f64>,
) -> Vec2<f64> {
    let goal_dir = (goal_point - agent.position)
        .normalized(1e-12)
        .unwrap_or(agent.heading);
    let mut weighted_sum = Vec2::zero();
    let mut weight_total = 0.0;
    let mut max_offset = 0.0_f64;
    for &marker in owned_markers {
        let offset = marker - agent.position;
        let dist = offset.norm();
        if dist <= 1e-12 {
            continue;
        }
        let cos_to_goal = offset.dot(goal_dir) / dist;
        let weight = (1.0 + cos_to_goal) / (1.0 + dist);
        weighted_sum += offset * weight;
        weight_total += weight;
        max_offset = max_offset.max(dist);
    }
    if weight_total <= 1e-12 || max_offset <= 1e-12 {
        return Vec2::zero();
    }
    weighted_sum * (agent.speed_phys / (weight_total * max_offset))
}

/// Rotate `heading` toward `desired_direction`, turning at most
/// `turn_factor * max_turn_rate * dt` radians. An exactly opposite desired
/// direction turns counterclockwise.
pub fn apply_turn_limit(
    heading: Vec2<f64>,
    desired_direction: Vec2<f64>,
    turn_factor: f64,
    max_turn_rate: f64,
    dt: f64,
) -> Vec2<f64> {
    let dot = heading.dot(desired_direction);
    let cross = heading.cross(desired_direction);
    let angle = if cross == 0.0 && dot < 0.0 {
        std::f64::consts::PI
    } else {
        cross.atan2(dot)
    };
    let limit = turn_factor * max_turn_rate * dt;
    let turn = angle.clamp(-limit, limit);
    let rotated = heading.rotated(turn);
    rotated.normalized(1e-12).unwrap_or(heading)
}

/// Pull straying members back toward their group. Any member farther than
/// `cohesion_dist` from the active-member centroid has its desired velocity
/// blended 50/50 with a centroid-seeking velocity at its own top speed.
/// Positions, top speeds, and velocities are parallel slices.
pub fn enforce_cohesion(
    positions: &[Vec2<f64>],
    top_speeds: &[f64],
    velocities: &mut [Vec2<f64>],
    cohesion_dist: f64,
) {
    if positions.len() < 2 {
        return;
    }
    let mut centroid = Vec2::zero();
    for p in positions {
        centroid += *p;
    }
    let centroid = centroid / positions.len() as f64;
    for ((pos, speed), vel) in positions.iter().zip(top_speeds).zip(velocities.iter_mut()) {
        let to_centroid = centroid - *pos;
        if to_centroid.norm() > cohesion_dist {
            if let Some(dir) = to_centroid.normalized(1e-12) {
                *vel = *vel * 0.5 + dir * (0.5 * speed);
            }
        }
    }
}

struct GroupRuntime {
    member_slots: Vec<usize>,
    cohesion_dist: f64,
}

/// One running simulation. Construction seeds the marker field and places
/// the agents; [`Simulation::step`] advances one tick.
pub struct Simulation {
    config: SimConfig,
    geometry: CircuitGeometry<f64>,
    field: MarkerField,
    agents: Vec<AgentState>,
    groups: Vec<GroupRuntime>,
    tick: u64,
    time: f64,
    overtakes: u64,
    // Scratch reused across ticks.
    claim_gen: u64,
    claims: Vec<(u64, f64, u32)>,
    candidates: Vec<Vec<(u32, f64)>>,
    velocities: Vec<Vec2<f64>>,
    owned_scratch: Vec<Vec2<f64>>,
    ahead_bits: Vec<Option<bool>>,
}

impl Simulation {
    pub fn new(config: &SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let geometry = config.build_geometry()?;
        let field = seed_markers(&geometry, config.marker_density, config.rng_seed);

        let n = config.population as usize;
        let mut agents = Vec::with_capacity(n);
        let l = geometry.centerline_length();
        for slot in 0..n {
            let profile = config.profiles.profile_for(slot);
            let traits = derive_traits(profile)?;
            let arc = l * slot as f64 / n as f64;
            let goal_index = initial_goal_index(&geometry, arc);
            agents.push(AgentState {
                id: slot as AgentId + 1,
                position: geometry.point_at(arc),
                heading: geometry.tangent_at(arc),
                goal_index,
                traits,
                group_id: None,
                laps_completed: 0,
                active: true,
                speed_phys: traits.speed_factor * config.mean_walk_speed,
                turn_rate_phys: traits.angular_variation * config.max_turn_rate,
                arc,
            });
        }

        let constants = ProxemicsConstants::<f64>::default();
        let mut groups = Vec::new();
        for group in &config.groups {
            let member_slots: Vec<usize> =
                group.members.iter().map(|&id| id as usize - 1).collect();
            let zeta = match group.cohesion {
                Some(z) => z,
                None => {
                    let phis: Vec<f64> = member_slots
                        .iter()
                        .map(|&s| agents[s].traits.collectivity)
                        .collect();
                    group_cohesion(&phis, &constants)?
                }
            };
            let cohesion_dist = cohesion_distance(zeta, &constants)?;
            for &slot in &member_slots {
                agents[slot].group_id = Some(groups.len());
            }
            groups.push(GroupRuntime {
                member_slots,
                cohesion_dist,
            });
        }

        let marker_count = field.len();
        Ok(Simulation {
            config: config.clone(),
            geometry,
            field,
            agents,
            groups,
            tick: 0,
            time: 0.0,
            overtakes: 0,
            claim_gen: 0,
            claims: vec![(0, 0.0, 0); marker_count],
            candidates: vec![Vec::new(); n],
            velocities: vec![Vec2::zero(); n],
            owned_scratch: Vec::new(),
            ahead_bits: vec![None; n * n],
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn geometry(&self) -> &CircuitGeometry<f64> {
        &self.geometry
    }

    pub fn field(&self) -> &MarkerField {
        &self.field
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn overtake_events(&self) -> u64 {
        self.overtakes
    }

    pub fn all_inactive(&self) -> bool {
        self.agents.iter().all(|a| !a.active)
    }

    /// Marker ownership computed by the last step: owner agent id per
    /// marker, or `None` for unclaimed markers.
    pub fn last_ownership(&self) -> Vec<Option<AgentId>> {
        self.claims
            .iter()
            .map(|&(gen, _, slot)| {
                if gen == self.claim_gen && self.claim_gen > 0 {
                    Some(self.agents[slot as usize].id)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Advance one tick: claim markers, build desired velocities, apply
    /// group cohesion, turn-limit the headings, integrate positions inside
    /// the corridor band, then update goals, laps, and exits.
    pub fn step(&mut self) -> Result<(), SimError> {
        if self.field.is_empty() {
            return Err(SimError::NoMarkers);
        }
        let dt = self.config.dt;
        let radius = self.config.marker_radius;
        let r2 = radius * radius;
        let l = self.geometry.centerline_length();

        // Marker claims: each marker goes to the nearest active agent in
        // range; the ascending iteration order makes the lowest id win exact
        // distance ties.
        self.claim_gen += 1;
        let gen = self.claim_gen;
        for slot in 0..self.agents.len() {
            if !self.agents[slot].active {
                self.candidates[slot].clear();
                continue;
            }
            let pos = self.agents[slot].position;
            let cands = &mut self.candidates[slot];
            cands.clear();
            let claims = &mut self.claims;
            self.field.for_each_near(pos, radius, |idx, mpos| {
                let d2 = (mpos - pos).norm_squared();
                if d2 <= r2 {
                    cands.push((idx, d2));
                    let claim = &mut claims[idx as usize];
                    if claim.0 != gen || d2 < claim.1 {
                        *claim = (gen, d2, slot as u32);
                    }
                }
            });
        }

        // Desired velocities from owned markers.
        for slot in 0..self.agents.len() {
            if !self.agents[slot].active {
                self.velocities[slot] = Vec2::zero();
                continue;
            }
            self.owned_scratch.clear();
            for &(idx, _) in &self.candidates[slot] {
                let claim = self.claims[idx as usize];
                if claim.0 == gen && claim.2 == slot as u32 {
                    self.owned_scratch.push(self.field.markers()[idx as usize]);
                }
            }
            let agent = &self.agents[slot];
            let goal = self.geometry.goal_points()[agent.goal_index];
            self.velocities[slot] = motion_vector(agent, &self.owned_scratch, goal);
        }

        // Group cohesion.
        for group in &self.groups {
            let active_slots: Vec<usize> = group
                .member_slots
                .iter()
                .copied()
                .filter(|&s| self.agents[s].active)
                .collect();
            if active_slots.len() < 2 {
                continue;
            }
            let positions: Vec<Vec2<f64>> =
                active_slots.iter().map(|&s| self.agents[s].position).collect();
            let speeds: Vec<f64> = active_slots.iter().map(|&s| self.agents[s].speed_phys).collect();
            let mut vels: Vec<Vec2<f64>> =
                active_slots.iter().map(|&s| self.velocities[s]).collect();
            enforce_cohesion(&positions, &speeds, &mut vels, group.cohesion_dist);
            for (&s, v) in active_slots.iter().zip(vels) {
                self.velocities[s] = v;
            }
        }

        // Turn, integrate, and bookkeep.
        for slot in 0..self.agents.len() {
            if !self.agents[slot].active {
                continue;
            }
            let velocity = self.velocities[slot];
            let speed = velocity.norm();
            let agent = &mut self.agents[slot];

            if speed > 1e-12 {
                let desired = velocity / speed;
                agent.heading = apply_turn_limit(
                    agent.heading,
                    desired,
                    agent.traits.angular_variation,
                    self.config.max_turn_rate,
                    dt,
                );
                let cap = speed * dt;
                let mut next = self.geometry.clamp_to_band(agent.position + agent.heading * cap);
                // Clamping against the curved inner wall can lengthen the
                // displacement a hair; re-scale until the speed cap holds.
                for _ in 0..16 {
                    let disp = next - agent.position;
                    let norm = disp.norm();
                    if norm <= cap + 1e-12 {
                        break;
                    }
                    next = self
                        .geometry
                        .clamp_to_band(agent.position + disp * (cap / norm));
                }
                let disp = next - agent.position;
                if disp.norm() > cap + 1e-9 {
                    next = agent.position;
                }
                agent.position = next;
            }

            // Goal switching.
            let goal = self.geometry.goal_points()[agent.goal_index];
            if agent.position.distance(goal) <= GOAL_RADIUS {
                agent.goal_index = (agent.goal_index + 1) % self.geometry.goal_points().len();
            }

            // Lap counting at start-line crossings.
            let new_arc = self.geometry.project(agent.position).arc;
            let diff = agent.arc - new_arc;
            if diff > l / 2.0 {
                agent.laps_completed += 1;
            } else if diff < -l / 2.0 {
                agent.laps_completed = agent.laps_completed.saturating_sub(1);
            }
            agent.arc = new_arc;

            // Exit after the final lap, a margin past the start line.
            if agent.laps_completed >= self.config.laps_to_walk
                && new_arc >= EXIT_MARGIN
                && new_arc <= l / 2.0
            {
                agent.active = false;
            }
        }

        self.count_overtakes(l);
        self.tick += 1;
        self.time += dt;
        Ok(())
    }

    /// Count pairs of active agents whose along-track order flipped since
    /// the previous tick.
    fn count_overtakes(&mut self, l: f64) {
        let n = self.agents.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let key = i * n + j;
                let both_active = self.agents[i].active && self.agents[j].active;
                if !both_active {
                    self.ahead_bits[key] = None;
                    continue;
                }
                let gap = (self.agents[i].arc - self.agents[j].arc).rem_euclid(l);
                let ahead = gap < l / 2.0;
                if let Some(prev) = self.ahead_bits[key] {
                    if prev != ahead {
                        self.overtakes += 1;
                    }
                }
                self.ahead_bits[key] = Some(ahead);
            }
        }
    }

    fn record_frame(&self) -> Frame {
        let mut frame = Frame::new();
        for agent in &self.agents {
            if agent.active {
                frame.insert(
                    agent.id,
                    Vec2::new(
                        quantize_coord(agent.position.x),
                        quantize_coord(agent.position.y),
                    ),
                );
            }
        }
        frame
    }
}

fn initial_goal_index(geometry: &CircuitGeometry<f64>, arc: f64) -> usize {
    let arcs = geometry.goal_arcs();
    for (i, &goal_arc) in arcs.iter().enumerate() {
        if goal_arc > arc + 1e-9 {
            return i;
        }
    }
    0
}

/// Run a configured simulation to completion (or its duration budget) and
/// collect the recorded trajectory. Positions in the returned dataset are
/// snapped to the trajectory CSV precision so the dataset round-trips
/// bit-exactly through emit and parse.
pub fn run(config: &SimConfig) -> Result<TrajectoryDataset, SimError> {
    let mut sim = Simulation::new(config)?;
    let max_ticks = (config.duration / config.dt).round().max(1.0) as u64;

    let mut frames = Vec::with_capacity(max_ticks as usize + 1);
    frames.push(sim.record_frame());
    while !sim.all_inactive() && sim.tick < max_ticks {
        sim.step()?;
        frames.push(sim.record_frame());
    }

    let timeout = !sim.all_inactive();
    Ok(TrajectoryDataset {
        frame_rate_hz: 1.0 / config.dt,
        frames,
        metadata: RunMetadata {
            source: DataSource::Simulated,
            seed: Some(config.rng_seed),
            config_digest: Some(config.digest()),
            timeout,
            tick_count: sim.tick,
            overtake_events: sim.overtakes,
            notes: Vec::new(),
        },
    })
}
