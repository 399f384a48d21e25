//! The closed corridor circuit: two straights joined by semicircular end
//! caps, walked anticlockwise. Positions project onto a periodic arc-length
//! coordinate along the centerline, which defines "ahead" and "behind".
//!
//! Layout in world coordinates: the first straight runs along the bottom
//! (`y = -arc_radius`) in the `+x` direction, the right cap turns up and
//! around, the second straight runs back along the top, and the left cap
//! closes the loop. The arc coordinate is zero at the start of the first
//! straight.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{num, Scalar};
use crate::vec2::Vec2;

/// Slack beyond the half-width within which a point still projects onto the
/// corridor for arc-coordinate queries, meters.
pub const ARC_QUERY_SLACK: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("point is outside the corridor")]
    OutsideCorridor,
}

/// Axis-aligned measurement rectangle anchored on the first straight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoiSpec<S = f64> {
    pub center: Vec2<S>,
    pub length_along_track: S,
    pub width: S,
}

impl<S: Scalar> RoiSpec<S> {
    /// Closed-boundary containment test: edge and corner points count as
    /// inside.
    pub fn contains(&self, point: Vec2<S>) -> bool {
        let two = num::<S>(2.0);
        (point.x - self.center.x).abs() <= self.length_along_track / two
            && (point.y - self.center.y).abs() <= self.width / two
    }

    pub fn area(&self) -> S {
        self.length_along_track * self.width
    }
}

/// Result of projecting a point onto the centerline.
#[derive(Debug, Clone, Copy)]
pub struct Projection<S = f64> {
    /// Arc-length coordinate of the nearest centerline point, in `[0, l)`.
    pub arc: S,
    /// Distance from the centerline, meters.
    pub lateral: S,
    /// The nearest centerline point itself.
    pub point: Vec2<S>,
}

/// The closed corridor loop with its goals and measurement region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitGeometry<S = f64> {
    centerline_length: S,
    corridor_width: S,
    straight_length: S,
    arc_radius: S,
    goal_points: Vec<Vec2<S>>,
    goal_arcs: Vec<S>,
    pub roi: RoiSpec<S>,
}

/// Build the circuit from its total centerline length, corridor width, and
/// the fraction of the centerline made of straights. Goal points go on the
/// four straight/arc junctions.
pub fn build_circuit<S: Scalar>(
    centerline_length: S,
    corridor_width: S,
    straight_fraction: S,
) -> Result<CircuitGeometry<S>, GeometryError> {
    let two = num::<S>(2.0);
    if !centerline_length.is_finite() || centerline_length <= S::zero() {
        return Err(GeometryError::InvalidGeometry(format!(
            "centerline_length must be positive, got {centerline_length}"
        )));
    }
    if !corridor_width.is_finite() || corridor_width <= S::zero() {
        return Err(GeometryError::InvalidGeometry(format!(
            "corridor_width must be positive, got {corridor_width}"
        )));
    }
    if !straight_fraction.is_finite()
        || straight_fraction < S::zero()
        || straight_fraction >= S::one()
    {
        return Err(GeometryError::InvalidGeometry(format!(
            "straight_fraction must be in [0, 1), got {straight_fraction}"
        )));
    }
    let straight_length = straight_fraction * centerline_length / two;
    let arc_radius = (S::one() - straight_fraction) * centerline_length / (two * S::PI());
    if arc_radius <= corridor_width / two {
        return Err(GeometryError::InvalidGeometry(format!(
            "arc_radius {arc_radius} must exceed half the corridor width"
        )));
    }

    let goal_arcs = vec![
        S::zero(),
        straight_length,
        straight_length + S::PI() * arc_radius,
        two * straight_length + S::PI() * arc_radius,
    ];
    let mut circuit = CircuitGeometry {
        centerline_length,
        corridor_width,
        straight_length,
        arc_radius,
        goal_points: Vec::new(),
        goal_arcs,
        roi: RoiSpec {
            center: Vec2::new(S::zero(), -arc_radius),
            length_along_track: num(2.0),
            width: corridor_width,
        },
    };
    circuit.goal_points = circuit
        .goal_arcs
        .iter()
        .map(|&s| circuit.point_at(s))
        .collect();
    Ok(circuit)
}

impl<S: Scalar> CircuitGeometry<S> {
    pub fn centerline_length(&self) -> S {
        self.centerline_length
    }

    pub fn corridor_width(&self) -> S {
        self.corridor_width
    }

    /// Length of each of the two straights.
    pub fn straight_length(&self) -> S {
        self.straight_length
    }

    pub fn arc_radius(&self) -> S {
        self.arc_radius
    }

    pub fn goal_points(&self) -> &[Vec2<S>] {
        &self.goal_points
    }

    pub fn goal_arcs(&self) -> &[S] {
        &self.goal_arcs
    }

    /// Area of the walkable band, square meters.
    pub fn band_area(&self) -> S {
        self.centerline_length * self.corridor_width
    }

    fn right_cap_center(&self) -> Vec2<S> {
        Vec2::new(self.straight_length / num(2.0), S::zero())
    }

    fn left_cap_center(&self) -> Vec2<S> {
        Vec2::new(-self.straight_length / num(2.0), S::zero())
    }

    /// Centerline point at arc coordinate `s` (taken mod the loop length).
    pub fn point_at(&self, s: S) -> Vec2<S> {
        let (seg, t) = self.segment_at(s);
        let half = self.straight_length / num(2.0);
        let r = self.arc_radius;
        match seg {
            0 => Vec2::new(-half + t, -r),
            1 => {
                let theta = -S::FRAC_PI_2() + t / r;
                self.right_cap_center() + Vec2::new(theta.cos(), theta.sin()) * r
            }
            2 => Vec2::new(half - t, r),
            _ => {
                let theta = S::FRAC_PI_2() + t / r;
                self.left_cap_center() + Vec2::new(theta.cos(), theta.sin()) * r
            }
        }
    }

    /// Unit tangent in the anticlockwise walking direction at arc `s`.
    pub fn tangent_at(&self, s: S) -> Vec2<S> {
        let (seg, t) = self.segment_at(s);
        let r = self.arc_radius;
        match seg {
            0 => Vec2::new(S::one(), S::zero()),
            1 => {
                let theta = -S::FRAC_PI_2() + t / r;
                Vec2::new(-theta.sin(), theta.cos())
            }
            2 => Vec2::new(-S::one(), S::zero()),
            _ => {
                let theta = S::FRAC_PI_2() + t / r;
                Vec2::new(-theta.sin(), theta.cos())
            }
        }
    }

    /// Segment index (0 = first straight, 1 = right cap, 2 = second straight,
    /// 3 = left cap) and the offset into it.
    fn segment_at(&self, s: S) -> (usize, S) {
        let l = self.centerline_length;
        let mut s = s % l;
        if s < S::zero() {
            s = s + l;
        }
        let cap = S::PI() * self.arc_radius;
        let straight = self.straight_length;
        if s < straight {
            (0, s)
        } else if s < straight + cap {
            (1, s - straight)
        } else if s < num::<S>(2.0) * straight + cap {
            (2, s - straight - cap)
        } else {
            (3, s - num::<S>(2.0) * straight - cap)
        }
    }

    /// Project a point onto the centerline. Total: every point in the plane
    /// gets a nearest centerline point (ties resolved in fixed segment
    /// order).
    pub fn project(&self, p: Vec2<S>) -> Projection<S> {
        let half = self.straight_length / num(2.0);
        let r = self.arc_radius;
        let cap_len = S::PI() * r;
        let mut best: Option<Projection<S>> = None;

        let mut consider = |arc: S, point: Vec2<S>| {
            let lateral = p.distance(point);
            if best.is_none_or(|b| lateral < b.lateral) {
                best = Some(Projection {
                    arc: arc % self.centerline_length,
                    lateral,
                    point,
                });
            }
        };

        // First straight.
        let cx = p.x.max(-half).min(half);
        consider(cx + half, Vec2::new(cx, -r));

        // Right cap: angles in [-pi/2, pi/2].
        let d = p - self.right_cap_center();
        let theta = if d.norm_squared() > S::zero() {
            d.y.atan2(d.x)
        } else {
            -S::FRAC_PI_2()
        };
        let theta = theta.max(-S::FRAC_PI_2()).min(S::FRAC_PI_2());
        consider(
            self.straight_length + (theta + S::FRAC_PI_2()) * r,
            self.right_cap_center() + Vec2::new(theta.cos(), theta.sin()) * r,
        );

        // Second straight.
        let cx = p.x.max(-half).min(half);
        consider(
            self.straight_length + cap_len + (half - cx),
            Vec2::new(cx, r),
        );

        // Left cap: angles in [pi/2, 3pi/2].
        let d = p - self.left_cap_center();
        let theta = if d.norm_squared() > S::zero() {
            d.y.atan2(d.x)
        } else {
            S::FRAC_PI_2()
        };
        let theta = if theta < S::zero() {
            theta + num::<S>(2.0) * S::PI()
        } else {
            theta
        };
        let three_half_pi = num::<S>(3.0) * S::FRAC_PI_2();
        let theta = theta.max(S::FRAC_PI_2()).min(three_half_pi);
        consider(
            num::<S>(2.0) * self.straight_length + cap_len + (theta - S::FRAC_PI_2()) * r,
            self.left_cap_center() + Vec2::new(theta.cos(), theta.sin()) * r,
        );

        best.expect("at least one projection candidate")
    }

    /// Distance from the centerline, meters.
    pub fn lateral_distance(&self, p: Vec2<S>) -> S {
        self.project(p).lateral
    }

    /// Whether the point lies inside the walkable band (within half the
    /// corridor width of the centerline, with a hair of float slack).
    pub fn contains(&self, p: Vec2<S>) -> bool {
        self.lateral_distance(p) <= self.corridor_width / num(2.0) + num(1e-9)
    }

    /// Pull a point back into the walkable band, projecting radially toward
    /// the centerline.
    pub fn clamp_to_band(&self, p: Vec2<S>) -> Vec2<S> {
        let proj = self.project(p);
        let half_w = self.corridor_width / num(2.0);
        if proj.lateral <= half_w {
            return p;
        }
        let dir = (p - proj.point) / proj.lateral;
        proj.point + dir * (half_w * (S::one() - num(1e-12)))
    }

    /// Axis-aligned bounding box of the corridor (outer walls).
    pub fn bounding_box(&self) -> (Vec2<S>, Vec2<S>) {
        let half = self.straight_length / num(2.0);
        let half_w = self.corridor_width / num(2.0);
        let reach = self.arc_radius + half_w;
        (
            Vec2::new(-half - reach, -reach),
            Vec2::new(half + reach, reach),
        )
    }
}

/// Arc-length coordinate of a point's centerline projection, periodic in the
/// loop length. Errors for points farther than half the corridor width plus
/// a small slack from the centerline.
pub fn arc_coordinate<S: Scalar>(
    point: Vec2<S>,
    circuit: &CircuitGeometry<S>,
) -> Result<S, GeometryError> {
    let proj = circuit.project(point);
    let limit = circuit.corridor_width() / num(2.0) + num(ARC_QUERY_SLACK);
    if proj.lateral > limit {
        return Err(GeometryError::OutsideCorridor);
    }
    Ok(proj.arc)
}

/// Whether a point lies in the measurement rectangle (closed boundary).
pub fn in_roi<S: Scalar>(point: Vec2<S>, roi: &RoiSpec<S>) -> bool {
    roi.contains(point)
}

/// The goal after `current_index`, wrapping around the loop.
pub fn next_goal<S: Scalar>(
    current_index: usize,
    circuit: &CircuitGeometry<S>,
) -> (usize, Vec2<S>) {
    let n = circuit.goal_points().len();
    let idx = (current_index + 1) % n;
    (idx, circuit.goal_points()[idx])
}
