use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::CircuitGeometry;
use crate::{AgentId, Vec2};

const CELL_SIZE: f64 = 0.5;

/// Ground markers scattered over the corridor band, fixed for a run, with a
/// uniform grid for range queries.
#[derive(Debug, Clone)]
pub struct MarkerField {
    markers: Vec<Vec2<f64>>,
    grid_min: Vec2<f64>,
    nx: i64,
    ny: i64,
    cells: Vec<Vec<u32>>,
}

impl MarkerField {
    fn build(markers: Vec<Vec2<f64>>, bbox: (Vec2<f64>, Vec2<f64>)) -> Self {
        let (min, max) = bbox;
        let nx = (((max.x - min.x) / CELL_SIZE).ceil() as i64).max(1);
        let ny = (((max.y - min.y) / CELL_SIZE).ceil() as i64).max(1);
        let mut cells = vec![Vec::new(); (nx * ny) as usize];
        for (idx, m) in markers.iter().enumerate() {
            let ix = (((m.x - min.x) / CELL_SIZE) as i64).clamp(0, nx - 1);
            let iy = (((m.y - min.y) / CELL_SIZE) as i64).clamp(0, ny - 1);
            cells[(iy * nx + ix) as usize].push(idx as u32);
        }
        MarkerField {
            markers,
            grid_min: min,
            nx,
            ny,
            cells,
        }
    }

    pub fn markers(&self) -> &[Vec2<f64>] {
        &self.markers
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }

    /// Visit every marker whose grid cell overlaps the disc; callers still
    /// need to check the exact distance.
    pub fn for_each_near<F: FnMut(u32, Vec2<f64>)>(
        &self,
        center: Vec2<f64>,
        radius: f64,
        mut f: F,
    ) {
        let lo_x = (((center.x - radius - self.grid_min.x) / CELL_SIZE).floor() as i64)
            .clamp(0, self.nx - 1);
        let hi_x = (((center.x + radius - self.grid_min.x) / CELL_SIZE).floor() as i64)
            .clamp(0, self.nx - 1);
        let lo_y = (((center.y - radius - self.grid_min.y) / CELL_SIZE).floor() as i64)
            .clamp(0, self.ny - 1);
        let hi_y = (((center.y + radius - self.grid_min.y) / CELL_SIZE).floor() as i64)
            .clamp(0, self.ny - 1);
        for iy in lo_y..=hi_y {
            for ix in lo_x..=hi_x {
                for &idx in &self.cells[(iy * self.nx + ix) as usize] {
                    f(idx, self.markers[idx as usize]);
                }
            }
        }
    }
}

/// Scatter markers uniformly over the corridor band: uniform draws over the
/// bounding box, kept when they land inside the band. The kept count is
/// binomial with mean `density * band_area`. Deterministic in the seed.
pub fn seed_markers(
    geometry: &CircuitGeometry<f64>,
    density: f64,
    rng_seed: u64,
) -> MarkerField {
    let bbox = geometry.bounding_box();
    let (min, max) = bbox;
    let bbox_area = (max.x - min.x) * (max.y - min.y);
    let draws = (density * bbox_area).round().max(0.0) as u64;
    let half_w = geometry.corridor_width() / 2.0;

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut markers = Vec::new();
    for _ in 0..draws {
        let p = Vec2::new(
            rng.random_range(min.x..max.x),
            rng.random_range(min.y..max.y),
        );
        if geometry.lateral_distance(p) <= half_w {
            markers.push(p);
        }
    }
    MarkerField::build(markers, bbox)
}

/// Claim each marker for the nearest agent within `radius`, ties broken by
/// the lowest agent id. Returns one owner slot per marker; exclusivity holds
/// by construction.
pub fn assign_markers(
    agents: &[(AgentId, Vec2<f64>)],
    field: &MarkerField,
    radius: f64,
) -> Vec<Option<AgentId>> {
    let mut best: Vec<Option<(f64, AgentId)>> = vec![None; field.len()];
    let r2 = radius * radius;
    for &(id, pos) in agents {
        field.for_each_near(pos, radius, |idx, mpos| {
            let d2 = (mpos - pos).norm_squared();
            if d2 <= r2 {
                let slot = &mut best[idx as usize];
                let better = match slot {
                    None => true,
                    Some((bd, bid)) => d2 < *bd || (d2 == *bd && id < *bid),
                };
                if better {
                    *slot = Some((d2, id));
                }
            }
        });
    }
    best.into_iter().map(|b| b.map(|(_, id)| id)).collect()
}
