//! The experiment config document and country preset handling.
//!
//! One JSON file describes one reproducible experiment:
//!
//! ```json
//! {
//!   "geometry":   {"l_corr": 17.3, "w_corr": 0.8, "straight_fraction": 0.6,
//!                  "roi": {"length": 2.0}},
//!   "simulation": {"dt": 0.033333, "duration": 300.0, "marker_density": 450.0,
//!                  "marker_radius": 1.0, "s_avg": 1.34, "alpha_max": 3.14159,
//!                  "laps": 2},
//!   "population": {"n": 20, "country": "germany", "groups": []},
//!   "seeds": [1, 2, 3]
//! }
//! ```
//!
//! Every section is optional; missing keys take the defaults above. The
//! population block takes either a `country` preset name or an explicit
//! `ocean` object with keys O, C, E, A, N.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use corrida::personality::OceanProfile;
use corrida::simulator::{GroupConfig, ProfileAssignment, SimConfig};

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub population: PopulationSection,
    #[serde(default)]
    pub seeds: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub l_corr: f64,
    pub w_corr: f64,
    pub straight_fraction: f64,
    #[serde(default)]
    pub roi: RoiSection,
}

impl Default for GeometrySection {
    fn default() -> Self {
        GeometrySection {
            l_corr: 17.3,
            w_corr: 0.8,
            straight_fraction: 0.6,
            roi: RoiSection::default(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoiSection {
    pub length: f64,
}

impl Default for RoiSection {
    fn default() -> Self {
        RoiSection { length: 2.0 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub dt: f64,
    pub duration: f64,
    pub marker_density: f64,
    pub marker_radius: f64,
    pub s_avg: f64,
    pub alpha_max: f64,
    pub laps: u32,
}

impl Default for SimulationSection {
    fn default() -> Self {
        SimulationSection {
            dt: 1.0 / 30.0,
            duration: 300.0,
            marker_density: 450.0,
            marker_radius: 1.0,
            s_avg: 1.34,
            alpha_max: std::f64::consts::PI,
            laps: 2,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSection {
    pub n: u32,
    #[serde(default)]
    pub country: Option<String>,
    #[serde(default)]
    pub ocean: Option<OceanProfile>,
    #[serde(default)]
    pub groups: Vec<GroupConfig>,
}

impl Default for PopulationSection {
    fn default() -> Self {
        PopulationSection {
            n: 1,
            country: None,
            ocean: None,
            groups: Vec::new(),
        }
    }
}

/// Bundled presets plus any user-supplied preset file, by name.
pub struct PresetBook {
    entries: BTreeMap<String, OceanProfile>,
}

impl PresetBook {
    pub fn bundled() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("germany".to_string(), OceanProfile::germany());
        entries.insert(
            "hispanic_american".to_string(),
            OceanProfile::hispanic_american(),
        );
        PresetBook { entries }
    }

    /// Merge a preset file: one `name: O=.. C=.. E=.. A=.. N=..` entry per
    /// line, `#` comments allowed. User entries override bundled names.
    pub fn load_file(&mut self, path: &Path) -> Result<(), String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read preset file {}: {e}", path.display()))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, profile) = parse_preset_line(line)
                .map_err(|e| format!("{} line {}: {e}", path.display(), idx + 1))?;
            self.entries.insert(name, profile);
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&OceanProfile> {
        // The Brazilian population is represented by the Hispanic-American
        // preset values.
        let key = if name == "brazil" {
            "hispanic_american"
        } else {
            name
        };
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &OceanProfile)> {
        self.entries.iter()
    }
}

fn parse_preset_line(line: &str) -> Result<(String, OceanProfile), String> {
    let (name, rest) = line
        .split_once(':')
        .ok_or_else(|| "expected `name: O=.. C=.. E=.. A=.. N=..`".to_string())?;
    let mut values: BTreeMap<&str, f64> = BTreeMap::new();
    for token in rest.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| format!("bad token `{token}`"))?;
        let value: f64 = value
            .parse()
            .map_err(|e| format!("bad value in `{token}`: {e}"))?;
        values.insert(key, value);
    }
    let get = |k: &str| {
        values
            .get(k)
            .copied()
            .ok_or_else(|| format!("missing trait {k}"))
    };
    let profile = OceanProfile::new(get("O")?, get("C")?, get("E")?, get("A")?, get("N")?)
        .map_err(|e| e.to_string())?;
    Ok((name.trim().to_string(), profile))
}

pub fn format_preset_line(name: &str, p: &OceanProfile) -> String {
    format!(
        "{name}: O={} C={} E={} A={} N={}",
        p.openness(),
        p.conscientiousness(),
        p.extraversion(),
        p.agreeableness(),
        p.neuroticism()
    )
}

/// The resolved experiment: profile label, the profile itself, population,
/// and the seed list.
pub struct ExperimentPlan {
    pub country: String,
    pub profile: OceanProfile,
    pub population: u32,
    pub seeds: Vec<u64>,
    pub doc: ConfigDoc,
}

impl ConfigDoc {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    /// Resolve the population's profile and seeds into a runnable plan.
    pub fn into_plan(self, presets: &PresetBook) -> Result<ExperimentPlan, String> {
        let (country, profile) = match (&self.population.ocean, &self.population.country) {
            (Some(profile), None) => ("custom".to_string(), *profile),
            (None, Some(name)) => {
                let profile = presets
                    .get(name)
                    .ok_or_else(|| format!("population.country: unknown preset `{name}`"))?;
                (name.clone(), *profile)
            }
            (None, None) => ("germany".to_string(), OceanProfile::germany()),
            (Some(_), Some(_)) => {
                return Err(
                    "population: give either `country` or `ocean`, not both".to_string()
                );
            }
        };
        let seeds = if self.seeds.is_empty() {
            vec![1]
        } else {
            self.seeds.clone()
        };
        Ok(ExperimentPlan {
            country,
            profile,
            population: self.population.n,
            seeds,
            doc: self,
        })
    }
}

impl ExperimentPlan {
    /// The simulator config for one seed of this plan.
    pub fn sim_config(&self, seed: u64) -> SimConfig {
        let doc = &self.doc;
        SimConfig {
            population: self.population,
            dt: doc.simulation.dt,
            duration: doc.simulation.duration,
            marker_density: doc.simulation.marker_density,
            marker_radius: doc.simulation.marker_radius,
            mean_walk_speed: doc.simulation.s_avg,
            max_turn_rate: doc.simulation.alpha_max,
            rng_seed: seed,
            laps_to_walk: doc.simulation.laps,
            corridor_length: doc.geometry.l_corr,
            corridor_width: doc.geometry.w_corr,
            straight_fraction: doc.geometry.straight_fraction,
            roi_length: doc.geometry.roi.length,
            profiles: ProfileAssignment::Uniform(self.profile),
            groups: doc.population.groups.clone(),
        }
    }
}

/// The config document schema, printed by `presets --schema`.
pub const CONFIG_SCHEMA: &str = r#"Experiment config (JSON). Every section is optional; defaults shown.
{
  "geometry": {
    "l_corr": 17.3,             // centerline length, meters
    "w_corr": 0.8,              // corridor width, meters
    "straight_fraction": 0.6,   // fraction of the loop made of straights
    "roi": { "length": 2.0 }    // measurement rectangle along the first straight;
                                // its width equals w_corr and it is centered there
  },
  "simulation": {
    "dt": 0.0333333,            // seconds per tick (default 1/30)
    "duration": 300.0,          // run budget, seconds
    "marker_density": 450.0,    // markers per square meter
    "marker_radius": 1.0,       // agent perception radius, meters
    "s_avg": 1.34,              // physical walk-speed scale, m/s
    "alpha_max": 3.14159265,    // physical turn-rate scale, rad/s
    "laps": 2                   // laps each agent walks before leaving
  },
  "population": {
    "n": 1,                     // number of agents
    "country": "germany",       // preset name, or instead:
    "ocean": {"O": 50, "C": 50, "E": 50, "A": 50, "N": 50},
    "groups": [                 // optional partition; cohesion defaults to the
      {"members": [1, 2]}       // scaled mean collectivity of the members
    ]
  },
  "seeds": [1]                  // one run per seed
}

Preset file (--presets): one entry per line, `#` comments allowed:
  norway: O=51.3 C=48.8 E=51.5 A=51.5 N=49.4
"#;
