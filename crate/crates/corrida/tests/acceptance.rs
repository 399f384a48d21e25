//! Acceptance suite. One test per criterion; each prints a `criterion N:`
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Heavy criteria serialize on a mutex so the in-test runtime budgets are
//! not distorted by one another.

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::Instant;

use corrida::analysis::{
    build_report, compare_reports, distance_analysis, histogram_pdf, kl_divergence,
    mean_roi_speed, pearson, voronoi_adjacency, AdjacencyRelation, DistanceDistribution, KlBase,
    DISTANCE_RANGE_M, VORONOI_PADDING_M,
};
use corrida::geometry::{build_circuit, CircuitGeometry};
use corrida::ingest::{emit_trajectories, parse_trajectories};
use corrida::personality::{
    angular_variation, cohesion_distance, collectivity, derive_traits, speed_factor, OceanProfile,
    ProxemicsConstants, ALPHA_MIN, PHI_MIN,
};
use corrida::simulator::{run, SimConfig, Simulation};
use corrida::{AgentId, Vec2};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

static HEAVY: Mutex<()> = Mutex::new(());

fn heavy_lock() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|poison| poison.into_inner())
}

// ─── exact-rational formula oracle ──────────────────────────────────────────

mod oracle {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    fn rat(x: f64) -> BigRational {
        BigRational::from_float(x).expect("finite input")
    }

    fn dec(numer: i64, denom: i64) -> BigRational {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    /// Eq-style collectivity, evaluated exactly.
    pub fn collectivity(a: f64, e: f64, n: f64) -> f64 {
        let hundred = dec(100, 1);
        let phi = (dec(2, 1) * rat(a) / &hundred
            + dec(50, 1) / (dec(8, 1) * rat(n) - &hundred)
            + dec(2, 1) * rat(e) / &hundred
            + dec(2, 1) * (dec(1, 1) - rat(n) / &hundred))
            / dec(7, 1);
        phi.to_f64().unwrap()
    }

    /// Angular variation, exactly, with the 1.208 constant as the decimal
    /// 1208/1000.
    pub fn angular_variation(o: f64, e: f64, phi: f64) -> f64 {
        let hundred = dec(100, 1);
        let alpha = (dec(1, 1) - rat(o) / &hundred + dec(1208, 1000)
            - dec(1, 16) / rat(phi)
            - rat(e) / &hundred)
            / dec(2, 1);
        alpha.to_f64().unwrap()
    }

    /// Speed factor, exactly, with 0.04 as 4/100.
    pub fn speed_factor(c: f64, e: f64, alpha: f64) -> f64 {
        let hundred = dec(100, 1);
        let s = ((dec(4, 100) * rat(c) - dec(1, 4) / rat(alpha)) / dec(4, 1)
            + (rat(e) / &hundred - rat(alpha) + dec(1, 1)) / dec(2, 1))
            / dec(2, 1);
        s.to_f64().unwrap()
    }

    /// Cohesion distance in the published arrangement
    /// `mu = H_s - zeta (H_s - H_p) / zeta_max`, exactly.
    pub fn cohesion_distance(zeta: f64) -> f64 {
        let hs = dec(36, 10);
        let hp = dec(12, 10);
        let mu = &hs - rat(zeta) * (&hs - &hp) / dec(3, 1);
        mu.to_f64().unwrap()
    }

    /// Full trait chain with the working-range clamps.
    pub fn derive(o: f64, c: f64, e: f64, a: f64, n: f64) -> (f64, f64, f64) {
        let phi = collectivity(a, e, n).clamp(1.0 / 16.0, 1.0);
        let alpha = angular_variation(o, e, phi).clamp(1e-3, 1.0);
        let s = speed_factor(c, e, alpha).clamp(0.0, 1.0);
        (phi, alpha, s)
    }
}

#[test]
fn criterion_1_formula_oracle_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0001);
    let constants = ProxemicsConstants::<f64>::default();
    let mut checked = 0;
    while checked < 1_000 {
        let o = rng.random_range(0.0..=100.0);
        let c = rng.random_range(0.0..=100.0);
        let e = rng.random_range(0.0..=100.0);
        let a = rng.random_range(0.0..=100.0);
        let n: f64 = rng.random_range(0.0..=100.0);
        // Guard band around the collectivity pole.
        if (8.0 * n - 100.0).abs() < 1e-3 {
            continue;
        }
        let profile = OceanProfile::new(o, c, e, a, n).unwrap();

        let phi = collectivity(&profile).unwrap();
        assert!((phi - oracle::collectivity(a, e, n)).abs() <= 1e-9);

        let phi_in = rng.random_range(PHI_MIN..=1.0);
        let alpha = angular_variation(&profile, phi_in).unwrap();
        assert!((alpha - oracle::angular_variation(o, e, phi_in)).abs() <= 1e-9);

        let alpha_in = rng.random_range(ALPHA_MIN..=1.0);
        let s = speed_factor(&profile, alpha_in).unwrap();
        assert!((s - oracle::speed_factor(c, e, alpha_in)).abs() <= 1e-9);

        let zeta = rng.random_range(0.0..=3.0);
        let mu = cohesion_distance(zeta, &constants).unwrap();
        assert!((mu - oracle::cohesion_distance(zeta)).abs() <= 1e-9);

        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "oracle suite took {elapsed:.2?}, budget is 1 s"
    );
    println!(
        "criterion 1: PASS — 1000 profiles within 1e-9 of the exact-rational oracle in {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_pinned_reference_values() {
    let constants = ProxemicsConstants::<f64>::default();
    assert_eq!(cohesion_distance(0.0, &constants).unwrap(), 3.6);
    assert_eq!(cohesion_distance(3.0, &constants).unwrap(), 1.2);

    // Country presets against the exact-rational oracle chain. The
    // six-decimal reference triples (0.432441, 0.511737, 0.412748) and
    // (0.438703, 0.539265, 0.433984) carry two middle digits ~2e-6 off the
    // exact chain (0.511736, 0.539267, 0.412749), so the oracle is
    // authoritative at 1e-9 and the reference triples are checked at the
    // coarser 2.5e-6 they actually satisfy.
    let cases = [
        ("germany", OceanProfile::germany(), (56.7, 46.7, 47.3, 49.1, 52.8), (0.432441, 0.511737, 0.412748)),
        (
            "hispanic_american",
            OceanProfile::hispanic_american(),
            (51.2, 51.6, 47.5, 47.1, 49.5),
            (0.438703, 0.539265, 0.433984),
        ),
    ];
    for (name, profile, (o, c, e, a, n), printed) in cases {
        let traits: corrida::personality::AgentTraits<f64> = derive_traits(&profile).unwrap();
        let (phi, alpha, s) = oracle::derive(o, c, e, a, n);
        assert!((traits.collectivity - phi).abs() <= 1e-9, "{name} phi");
        assert!((traits.angular_variation - alpha).abs() <= 1e-9, "{name} alpha");
        assert!((traits.speed_factor - s).abs() <= 1e-9, "{name} s");
        assert!((traits.collectivity - printed.0).abs() <= 2.5e-6);
        assert!((traits.angular_variation - printed.1).abs() <= 2.5e-6);
        assert!((traits.speed_factor - printed.2).abs() <= 2.5e-6);
        println!(
            "criterion 2: {name} derive_traits = ({:.6}, {:.6}, {:.6}) vs oracle ({phi:.6}, {alpha:.6}, {s:.6})",
            traits.collectivity, traits.angular_variation, traits.speed_factor
        );
    }
    println!("criterion 2: PASS — cohesion endpoints exact, preset traits match the oracle");
}

// ─── raster Voronoi oracle ──────────────────────────────────────────────────

const RASTER_CELL_M: f64 = 0.01;

/// Brute-force adjacency: rasterize the box at 1 cm, own each cell by its
/// nearest site, and call two sites adjacent when their regions share at
/// least two edge-adjacent cell pairs. Also reports how fragile each pair's
/// boundary is so near-threshold configurations can be rejected.
fn raster_adjacency(
    sites: &BTreeMap<AgentId, Vec2<f64>>,
    bbox: (Vec2<f64>, Vec2<f64>),
) -> (AdjacencyRelationLike, BTreeMap<(AgentId, AgentId), u32>) {
    let (lo, hi) = bbox;
    let nx = ((hi.x - lo.x) / RASTER_CELL_M).round() as usize;
    let ny = ((hi.y - lo.y) / RASTER_CELL_M).round() as usize;
    let site_list: Vec<(AgentId, Vec2<f64>)> = sites.iter().map(|(&i, &p)| (i, p)).collect();

    let mut owner = vec![0u32; nx * ny];
    for iy in 0..ny {
        let y = lo.y + (iy as f64 + 0.5) * RASTER_CELL_M;
        for ix in 0..nx {
            let x = lo.x + (ix as f64 + 0.5) * RASTER_CELL_M;
            let p = Vec2::new(x, y);
            let mut best = (f64::INFINITY, 0u32);
            for &(id, site) in &site_list {
                let d2 = (site - p).norm_squared();
                if d2 < best.0 {
                    best = (d2, id);
                }
            }
            owner[iy * nx + ix] = best.1;
        }
    }

    let mut boundary: BTreeMap<(AgentId, AgentId), u32> = BTreeMap::new();
    let mut bump = |a: u32, b: u32| {
        if a != b {
            *boundary.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    };
    for iy in 0..ny {
        for ix in 0..nx {
            let here = owner[iy * nx + ix];
            if ix + 1 < nx {
                bump(here, owner[iy * nx + ix + 1]);
            }
            if iy + 1 < ny {
                bump(here, owner[(iy + 1) * nx + ix]);
            }
        }
    }
    let pairs = boundary
        .iter()
        .filter(|(_, &count)| count >= 2)
        .map(|(&pair, _)| pair)
        .collect();
    (AdjacencyRelationLike { pairs }, boundary)
}

struct AdjacencyRelationLike {
    pairs: std::collections::BTreeSet<(AgentId, AgentId)>,
}

fn relation_pairs(r: &AdjacencyRelation) -> std::collections::BTreeSet<(AgentId, AgentId)> {
    r.pairs().collect()
}

/// Reject configurations with four nearly cocircular sites (the brute-force
/// and exact answers legitimately disagree there).
fn has_cocircular_degeneracy(sites: &[Vec2<f64>]) -> bool {
    let n = sites.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (a, b, c) = (sites[i], sites[j], sites[k]);
                let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
                if d.abs() < 1e-9 {
                    continue;
                }
                let a2 = a.norm_squared();
                let b2 = b.norm_squared();
                let c2 = c.norm_squared();
                let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
                let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
                let center = Vec2::new(ux, uy);
                let radius = center.distance(a);
                for (m, &p) in sites.iter().enumerate() {
                    if m == i || m == j || m == k {
                        continue;
                    }
                    if (center.distance(p) - radius).abs() < 1e-6 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[test]
fn criterion_3_voronoi_raster_oracle() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let geometry: CircuitGeometry<f64> = build_circuit(17.3, 0.8, 0.6).unwrap();
    let (lo, hi) = geometry.bounding_box();
    let pad = Vec2::new(VORONOI_PADDING_M, VORONOI_PADDING_M);
    let bbox = (lo - pad, hi + pad);

    // The two required fixtures first.
    let collinear: BTreeMap<AgentId, Vec2<f64>> = [
        (1, Vec2::new(-1.0, 0.0)),
        (2, Vec2::new(0.0, 0.0)),
        (3, Vec2::new(1.0, 0.0)),
    ]
    .into();
    let square: BTreeMap<AgentId, Vec2<f64>> = [
        (1, Vec2::new(-0.5, -0.5)),
        (2, Vec2::new(0.5, -0.5)),
        (3, Vec2::new(0.5, 0.5)),
        (4, Vec2::new(-0.5, 0.5)),
    ]
    .into();
    for (name, sites) in [("collinear-3", &collinear), ("square-4", &square)] {
        let exact = voronoi_adjacency(sites, bbox).unwrap();
        let (raster, _) = raster_adjacency(sites, bbox);
        assert_eq!(
            relation_pairs(&exact),
            raster.pairs,
            "fixture {name} disagrees with the raster oracle"
        );
    }

    // 50 random solid configurations of 2-10 sites inside the corridor box.
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0003);
    let mut accepted = 0;
    let mut rejected = 0;
    while accepted < 50 {
        let n = rng.random_range(2..=10usize);
        let sites_map: BTreeMap<AgentId, Vec2<f64>> = (0..n)
            .map(|i| {
                (
                    i as AgentId + 1,
                    Vec2::new(
                        rng.random_range(lo.x..hi.x),
                        rng.random_range(lo.y..hi.y),
                    ),
                )
            })
            .collect();
        let positions: Vec<Vec2<f64>> = sites_map.values().copied().collect();
        if has_cocircular_degeneracy(&positions) {
            rejected += 1;
            continue;
        }
        let (raster, boundary) = raster_adjacency(&sites_map, bbox);
        // Near-threshold boundaries (1-4 shared cell edges) are too fragile
        // for a 1 cm raster to arbitrate; resample.
        if boundary.values().any(|&c| (1..=4).contains(&c)) {
            rejected += 1;
            continue;
        }
        let exact = voronoi_adjacency(&sites_map, bbox).unwrap();
        assert_eq!(
            relation_pairs(&exact),
            raster.pairs,
            "random configuration {accepted} ({n} sites) disagrees"
        );
        accepted += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "raster oracle took {elapsed:.2?}, budget is 30 s"
    );
    println!(
        "criterion 3: PASS — fixtures + 50 random configurations match the raster oracle \
         ({rejected} degenerate/fragile resamples) in {elapsed:.2?}"
    );
}

#[test]
fn criterion_4_simulation_invariant_sweep() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let config = SimConfig {
        duration: 60.0,
        ..SimConfig::for_population(34, OceanProfile::germany())
    };
    let mut sim = Simulation::new(&config).unwrap();
    let dt = config.dt;
    let half_w = config.corridor_width / 2.0;
    let r2 = config.marker_radius * config.marker_radius;
    let ticks = (config.duration / dt).round() as u64;

    let mut exclusivity_violations = 0u64;
    let mut speed_violations = 0u64;
    let mut wall_violations = 0u64;

    for tick in 0..ticks {
        let snapshot: Vec<(AgentId, Vec2<f64>, bool, f64)> = sim
            .agents()
            .iter()
            .map(|a| (a.id, a.position, a.active, a.speed_phys))
            .collect();
        sim.step().unwrap();

        for (agent, &(_, old_pos, was_active, speed_phys)) in sim.agents().iter().zip(&snapshot) {
            if !was_active {
                continue;
            }
            if agent.position.distance(old_pos) > speed_phys * dt + 1e-9 {
                speed_violations += 1;
            }
            if agent.active
                && sim.geometry().lateral_distance(agent.position) > half_w + 1e-9
            {
                wall_violations += 1;
            }
        }

        // Ownership audit against a brute-force nearest-agent pass over the
        // claim-time positions.
        if tick % 3 == 0 {
            let owners = sim.last_ownership();
            let actives: Vec<(AgentId, Vec2<f64>)> = snapshot
                .iter()
                .filter(|(_, _, active, _)| *active)
                .map(|&(id, pos, _, _)| (id, pos))
                .collect();
            for (idx, marker) in sim.field().markers().iter().enumerate() {
                let mut best: Option<(f64, AgentId)> = None;
                for &(id, pos) in &actives {
                    let d2 = (pos - *marker).norm_squared();
                    if d2 <= r2 {
                        let better = match best {
                            None => true,
                            Some((bd, bid)) => d2 < bd || (d2 == bd && id < bid),
                        };
                        if better {
                            best = Some((d2, id));
                        }
                    }
                }
                if owners[idx] != best.map(|(_, id)| id) {
                    exclusivity_violations += 1;
                }
            }
        }
    }

    assert_eq!(exclusivity_violations, 0, "marker exclusivity violated");
    assert_eq!(speed_violations, 0, "speed cap violated");
    assert_eq!(wall_violations, 0, "wall containment violated");

    // Bit-identical rerun under the same seed.
    let a = run(&config).unwrap();
    let b = run(&config).unwrap();
    assert_eq!(a, b, "rerun with the same seed must be bit-identical");

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "invariant sweep took {elapsed:.2?}, budget is 10 s"
    );
    println!(
        "criterion 4: PASS — {ticks} ticks, zero exclusivity/speed/wall violations, \
         bit-identical rerun, in {elapsed:.2?}"
    );
}

#[test]
fn criterion_5_fd_congestion() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let geometry: CircuitGeometry<f64> = SimConfig::default().build_geometry().unwrap();
    let seeds: Vec<u64> = (1..=10).collect();

    let mut mean_distance = BTreeMap::new();
    let mut mean_speed = BTreeMap::new();
    for n in [15u32, 25, 34] {
        let mut distances = Vec::new();
        let mut speeds = Vec::new();
        for &seed in &seeds {
            let config = SimConfig {
                duration: 120.0,
                rng_seed: seed,
                ..SimConfig::for_population(n, OceanProfile::germany())
            };
            let data = run(&config).unwrap();
            let analysis = distance_analysis(&data, &geometry, &geometry.roi);
            assert!(
                !analysis.samples.is_empty(),
                "N={n} seed={seed} produced no region samples"
            );
            let mean = analysis.samples.iter().map(|s| s.distance).sum::<f64>()
                / analysis.samples.len() as f64;
            distances.push(mean);
            speeds.push(mean_roi_speed(&data, &geometry.roi).unwrap());
        }
        mean_distance.insert(n, distances.iter().sum::<f64>() / distances.len() as f64);
        mean_speed.insert(n, speeds.iter().sum::<f64>() / speeds.len() as f64);
    }

    println!(
        "criterion 5: seed-averaged mean distances: N=15 {:.4}, N=25 {:.4}, N=34 {:.4}; \
         speeds: N=15 {:.4}, N=34 {:.4} (in {:.2?})",
        mean_distance[&15],
        mean_distance[&25],
        mean_distance[&34],
        mean_speed[&15],
        mean_speed[&34],
        start.elapsed()
    );
    assert!(
        mean_distance[&15] > mean_distance[&25] && mean_distance[&25] > mean_distance[&34],
        "personal distance must strictly decrease with density: {mean_distance:?}"
    );
    assert!(
        mean_speed[&34] < mean_speed[&15],
        "region speed at N=34 must be below N=15: {mean_speed:?}"
    );
    println!("criterion 5: PASS — distances strictly decrease and N=34 is slower than N=15");
}

#[test]
fn criterion_6_country_ordering() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let geometry: CircuitGeometry<f64> = SimConfig::default().build_geometry().unwrap();
    let seeds: Vec<u64> = (1..=24).collect();

    let mut results = BTreeMap::new();
    for (label, profile) in [
        ("germany", OceanProfile::germany()),
        ("hispanic_american", OceanProfile::hispanic_american()),
    ] {
        let mut roi_means = Vec::new();
        let mut loop_means = Vec::new();
        for &seed in &seeds {
            let config = SimConfig {
                duration: 150.0,
                rng_seed: seed,
                ..SimConfig::for_population(20, profile)
            };
            let data = run(&config).unwrap();
            let analysis = distance_analysis(&data, &geometry, &geometry.roi);
            assert!(!analysis.samples.is_empty());
            roi_means.push(
                analysis.samples.iter().map(|s| s.distance).sum::<f64>()
                    / analysis.samples.len() as f64,
            );
            loop_means.push(analysis.full_loop_mean.unwrap());
        }
        let roi = roi_means.iter().sum::<f64>() / roi_means.len() as f64;
        let full = loop_means.iter().sum::<f64>() / loop_means.len() as f64;
        results.insert(label, (roi, full, roi_means));
    }

    let (ger_roi, ger_loop, ger_seeds) = &results["germany"];
    let (ha_roi, ha_loop, ha_seeds) = &results["hispanic_american"];
    println!(
        "criterion 6: N=20, {} seeds: hispanic_american ROI mean {:.4} vs germany {:.4} \
         (full-loop means {:.4} vs {:.4}, pinned near l/N = {:.4}) in {:.2?}",
        seeds.len(),
        ha_roi,
        ger_roi,
        ha_loop,
        ger_loop,
        17.3 / 20.0,
        start.elapsed()
    );

    if ha_roi >= ger_roi {
        println!("criterion 6: PASS — Hispanic-American mean personal distance >= Germany");
    } else {
        // The ordering claim failed under the default motion scaling; the
        // criterion requires the analysis to be documented against the
        // closed-loop headway pinning question. On a closed loop the
        // time-averaged headway is pinned near l/N for any homogeneous
        // population, so the region-sampled difference rides only on
        // clustering and flux weighting; the per-seed pairs below document
        // how far inside the noise band the ordering sits.
        println!("criterion 6: ORDERING FAILED — documented analysis follows");
        println!(
            "  full-loop means (headway pinning): hispanic {ha_loop:.4} vs germany {ger_loop:.4} \
             (both near l/N = {:.4})",
            17.3 / 20.0
        );
        for (seed, (g, h)) in seeds.iter().zip(ger_seeds.iter().zip(ha_seeds)) {
            println!("  seed {seed}: germany {g:.4}, hispanic {h:.4}");
        }
        panic!(
            "country ordering failed: hispanic {ha_roi:.4} < germany {ger_roi:.4}; \
             see documented analysis above and the headway-pinning note in the module docs"
        );
    }
}

#[test]
fn criterion_7_statistics_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0007);
    let edges: Vec<f64> = (0..=25).map(|i| i as f64 * 0.1).collect();
    let random_pdf = |rng: &mut ChaCha8Rng| {
        let raw: Vec<f64> = (0..25).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum();
        DistanceDistribution {
            bin_edges: edges.clone(),
            probabilities: raw.into_iter().map(|x| x / total).collect(),
        }
    };

    for _ in 0..1_000 {
        let p = random_pdf(&mut rng);
        let q = random_pdf(&mut rng);
        let d = kl_divergence(&p, &q, KlBase::Nats).unwrap();
        assert!(d >= -1e-12, "KL must be non-negative, got {d}");
        let self_d = kl_divergence(&p, &p, KlBase::Nats).unwrap();
        assert!(self_d.abs() <= 1e-12);
    }

    // Worked KL value.
    let p = DistanceDistribution {
        bin_edges: vec![0.0, 1.0, 2.0],
        probabilities: vec![0.5, 0.5],
    };
    let q = DistanceDistribution {
        bin_edges: vec![0.0, 1.0, 2.0],
        probabilities: vec![0.25, 0.75],
    };
    let worked: f64 = kl_divergence(&p, &q, KlBase::Nats).unwrap();
    assert!((worked - 0.143841).abs() <= 1e-6);

    // Pearson affine invariance and the worked 3-point fixture.
    for _ in 0..200 {
        let n = rng.random_range(3..30usize);
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| 0.4 * x + ((i * 7) as f64).sin())
            .collect();
        let Ok(r) = pearson(&xs, &ys) else { continue };
        let a = rng.random_range(0.1..10.0);
        let b = rng.random_range(-10.0..10.0);
        let xs2: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let r2 = pearson(&xs2, &ys).unwrap();
        assert!((r - r2).abs() <= 1e-9, "affine invariance broke: {r} vs {r2}");
    }
    let worked: f64 = pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
    assert!((worked - 0.5).abs() <= 1e-12);

    println!(
        "criterion 7: PASS — KL non-negative on 1000 pairs, self-KL <= 1e-12, worked values match"
    );
}

#[test]
fn criterion_8_pipeline_round_trip() {
    let _guard = heavy_lock();
    let config = SimConfig {
        duration: 60.0,
        rng_seed: 11,
        ..SimConfig::for_population(12, OceanProfile::germany())
    };
    let geometry = config.build_geometry().unwrap();
    let dataset = run(&config).unwrap();

    // The emitted CSV parses back to the identical dataset.
    let mut csv = Vec::new();
    emit_trajectories(&dataset, &mut csv).unwrap();
    let mut reparsed = parse_trajectories(csv.as_slice()).unwrap();
    reparsed.frame_rate_hz = dataset.frame_rate_hz;
    reparsed.metadata = dataset.metadata.clone();
    assert_eq!(reparsed, dataset, "CSV round-trip must be bit-exact");

    // Analyzing the re-ingested dataset gives the identical report.
    let direct = build_report(&dataset, &geometry, &geometry.roi, 25, "run").unwrap();
    let ingested = build_report(&reparsed, &geometry, &geometry.roi, 25, "run").unwrap();
    assert_eq!(direct, ingested, "in-memory and round-tripped reports differ");

    // And the comparison of the two is the degenerate self-comparison.
    let doc = compare_reports(&direct, &ingested, KlBase::Nats).unwrap();
    assert_eq!(doc.kl_a_b, 0.0);
    assert!((doc.pearson_rank_paired.unwrap() - 1.0).abs() <= 1e-12);

    println!("criterion 8: PASS — simulate -> emit -> ingest -> analyze is exact");
}

// A tiny sanity anchor used by the suite itself: histogram mass conservation
// under clipping, since the distance samples feed every criterion above.
#[test]
fn histogram_pipeline_sanity() {
    let samples = vec![0.1, 0.2, 2.49, 3.0, -0.2];
    let d = histogram_pdf(&samples, 25, DISTANCE_RANGE_M).unwrap();
    let total: f64 = d.probabilities.iter().sum();
    assert!((total - 1.0).abs() <= 1e-9);
}
