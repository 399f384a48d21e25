use std::collections::{BTreeMap, BTreeSet};

use super::AnalysisError;
use crate::{AgentId, Vec2};

/// The Voronoi diagram is evaluated inside the corridor's bounding box grown
/// by this much on each side, meters.
pub const VORONOI_PADDING_M: f64 = 1.0;

/// Positions closer than this are duplicates, meters.
const DUPLICATE_TOL: f64 = 1e-9;

/// Symmetric, irreflexive neighbor relation for one frame.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdjacencyRelation {
    pairs: BTreeSet<(AgentId, AgentId)>,
}

impl AdjacencyRelation {
    fn insert(&mut self, a: AgentId, b: AgentId) {
        if a != b {
            self.pairs.insert((a.min(b), a.max(b)));
        }
    }

    pub fn contains(&self, a: AgentId, b: AgentId) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn neighbors_of(&self, id: AgentId) -> Vec<AgentId> {
        self.pairs
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Agents are neighbors when their Voronoi cells, clipped to the padded
/// bounding box, share a boundary segment of positive length. Cells that
/// touch only at a point (degenerate cocircular configurations) do not
/// count.
///
/// Each cell is cut directly from the box by the perpendicular-bisector
/// half-planes of the other sites, tracking which site contributed each
/// edge; this is equivalent to the box-clipped Delaunay dual but has no
/// cocircularity special cases.
pub fn voronoi_adjacency(
    positions: &BTreeMap<AgentId, Vec2<f64>>,
    bbox: (Vec2<f64>, Vec2<f64>),
) -> Result<AdjacencyRelation, AnalysisError> {
    let sites: Vec<(AgentId, Vec2<f64>)> = positions.iter().map(|(&id, &p)| (id, p)).collect();
    if sites.len() < 2 {
        return Err(AnalysisError::TooFewPoints(sites.len()));
    }
    for i in 0..sites.len() {
        for j in (i + 1)..sites.len() {
            if sites[i].1.distance(sites[j].1) < DUPLICATE_TOL {
                return Err(AnalysisError::DuplicatePoints);
            }
        }
    }

    let (lo, hi) = bbox;
    let diag = (hi - lo).norm();
    let eps_clip = diag * 1e-12;
    let min_edge = diag * 1e-9;

    let mut relation = AdjacencyRelation::default();
    let mut order: Vec<usize> = Vec::new();
    for (i, &(id_i, p_i)) in sites.iter().enumerate() {
        // Neighbors sorted by distance allow breaking once no closer
        // bisector can cut the remaining cell.
        order.clear();
        order.extend((0..sites.len()).filter(|&j| j != i));
        order.sort_by(|&a, &b| {
            sites[a]
                .1
                .distance(p_i)
                .partial_cmp(&sites[b].1.distance(p_i))
                .unwrap()
        });

        let mut cell: Vec<(Vec2<f64>, Option<AgentId>)> = vec![
            (lo, None),
            (Vec2::new(hi.x, lo.y), None),
            (hi, None),
            (Vec2::new(lo.x, hi.y), None),
        ];
        for &j in &order {
            let (id_j, p_j) = sites[j];
            let max_reach = cell
                .iter()
                .map(|(v, _)| v.distance(p_i))
                .fold(0.0_f64, f64::max);
            if p_j.distance(p_i) / 2.0 >= max_reach {
                break;
            }
            cell = clip_halfplane(&cell, p_i, p_j, id_j, eps_clip);
            if cell.len() < 3 {
                break;
            }
        }
        if cell.len() < 3 {
            continue;
        }
        for (k, &(v, tag)) in cell.iter().enumerate() {
            if let Some(id_j) = tag {
                let next = cell[(k + 1) % cell.len()].0;
                if v.distance(next) > min_edge {
                    relation.insert(id_i, id_j);
                }
            }
        }
    }
    Ok(relation)
}

/// Clip a convex polygon with the half-plane of points at least as close to
/// `keep` as to `other`. Vertices carry the tag of the edge they start;
/// edges created by this cut are tagged with `other`'s id.
fn clip_halfplane(
    cell: &[(Vec2<f64>, Option<AgentId>)],
    keep: Vec2<f64>,
    other: Vec2<f64>,
    other_id: AgentId,
    eps: f64,
) -> Vec<(Vec2<f64>, Option<AgentId>)> {
    let normal = other - keep;
    let mid = (keep + other) * 0.5;
    let signed = |p: Vec2<f64>| (p - mid).dot(normal);

    let mut out = Vec::with_capacity(cell.len() + 1);
    for k in 0..cell.len() {
        let (a, tag) = cell[k];
        let (b, _) = cell[(k + 1) % cell.len()];
        let sa = signed(a);
        let sb = signed(b);
        let a_in = sa <= eps;
        let b_in = sb <= eps;
        if a_in {
            out.push((a, tag));
            if !b_in {
                let t = sa / (sa - sb);
                out.push((a + (b - a) * t, Some(other_id)));
            }
        } else if b_in {
            let t = sa / (sa - sb);
            out.push((a + (b - a) * t, tag));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bbox() -> (Vec2<f64>, Vec2<f64>) {
        (Vec2::new(-2.0, -2.0), Vec2::new(4.0, 4.0))
    }

    fn relation(points: &[(AgentId, (f64, f64))]) -> AdjacencyRelation {
        let map: BTreeMap<AgentId, Vec2<f64>> = points
            .iter()
            .map(|&(id, (x, y))| (id, Vec2::new(x, y)))
            .collect();
        voronoi_adjacency(&map, bbox()).unwrap()
    }

    #[test]
    fn two_points_are_adjacent() {
        let r = relation(&[(1, (0.0, 0.0)), (2, (1.0, 0.5))]);
        assert!(r.contains(1, 2));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn three_collinear_points_form_a_chain() {
        let r = relation(&[(1, (0.0, 0.0)), (2, (1.0, 0.0)), (3, (2.0, 0.0))]);
        assert!(r.contains(1, 2));
        assert!(r.contains(2, 3));
        assert!(!r.contains(1, 3), "the middle slab separates the ends");
    }

    #[test]
    fn square_sides_adjacent_diagonals_not() {
        let r = relation(&[
            (1, (0.0, 0.0)),
            (2, (1.0, 0.0)),
            (3, (1.0, 1.0)),
            (4, (0.0, 1.0)),
        ]);
        assert!(r.contains(1, 2));
        assert!(r.contains(2, 3));
        assert!(r.contains(3, 4));
        assert!(r.contains(1, 4));
        assert!(!r.contains(1, 3), "diagonal cells meet only at the center");
        assert!(!r.contains(2, 4), "diagonal cells meet only at the center");
    }

    #[test]
    fn errors_on_degenerate_input() {
        let one: BTreeMap<AgentId, Vec2<f64>> = [(1, Vec2::new(0.0, 0.0))].into();
        assert_eq!(
            voronoi_adjacency(&one, bbox()),
            Err(AnalysisError::TooFewPoints(1))
        );
        let dup: BTreeMap<AgentId, Vec2<f64>> = [
            (1, Vec2::new(0.0, 0.0)),
            (2, Vec2::new(0.0, 0.0)),
        ]
        .into();
        assert_eq!(
            voronoi_adjacency(&dup, bbox()),
            Err(AnalysisError::DuplicatePoints)
        );
    }

    #[test]
    fn relation_is_symmetric_and_irreflexive() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.random_range(2..10usize);
            let map: BTreeMap<AgentId, Vec2<f64>> = (0..n)
                .map(|i| {
                    (
                        i as AgentId + 1,
                        Vec2::new(rng.random_range(-1.5..3.5), rng.random_range(-1.5..3.5)),
                    )
                })
                .collect();
            let r = voronoi_adjacency(&map, bbox()).unwrap();
            for (a, b) in r.pairs() {
                assert!(a < b);
                assert!(r.contains(b, a));
            }
            for id in map.keys() {
                assert!(!r.contains(*id, *id));
            }
            // Two-site frames always have their single pair.
            if n == 2 {
                assert_eq!(r.len(), 1);
            }
        }
    }
}
