use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::trajectory::TrajectoryDataset;
use crate::Vec2;

const DET_GUARD: f64 = 1e-12;

/// Invertible affine map of the plane: `p -> M p + t`, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineTransform2D {
    /// Row-major 2x2 linear part.
    pub matrix: [[f64; 2]; 2],
    pub translation: Vec2<f64>,
}

impl AffineTransform2D {
    pub fn identity() -> Self {
        AffineTransform2D {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
            translation: Vec2::zero(),
        }
    }

    pub fn scale(k: f64) -> Self {
        AffineTransform2D {
            matrix: [[k, 0.0], [0.0, k]],
            translation: Vec2::zero(),
        }
    }

    pub fn determinant(&self) -> f64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn apply(&self, p: Vec2<f64>) -> Vec2<f64> {
        Vec2::new(
            self.matrix[0][0] * p.x + self.matrix[0][1] * p.y + self.translation.x,
            self.matrix[1][0] * p.x + self.matrix[1][1] * p.y + self.translation.y,
        )
    }

    pub fn inverse(&self) -> Result<Self, IngestError> {
        let det = self.determinant();
        if det.abs() <= DET_GUARD {
            return Err(IngestError::SingularTransform);
        }
        let inv = [
            [self.matrix[1][1] / det, -self.matrix[0][1] / det],
            [-self.matrix[1][0] / det, self.matrix[0][0] / det],
        ];
        let t = Vec2::new(
            -(inv[0][0] * self.translation.x + inv[0][1] * self.translation.y),
            -(inv[1][0] * self.translation.x + inv[1][1] * self.translation.y),
        );
        Ok(AffineTransform2D {
            matrix: inv,
            translation: t,
        })
    }

    /// `self` after `other`: `(self ∘ other)(p) = self(other(p))`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.matrix;
        let b = &other.matrix;
        AffineTransform2D {
            matrix: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
            translation: self.apply(other.translation),
        }
    }
}

/// Map every position in the dataset; the applied transform is recorded in
/// the metadata notes.
pub fn apply_transform(
    dataset: &TrajectoryDataset,
    t: &AffineTransform2D,
) -> Result<TrajectoryDataset, IngestError> {
    if t.determinant().abs() <= DET_GUARD {
        return Err(IngestError::SingularTransform);
    }
    let mut out = dataset.clone();
    for frame in &mut out.frames {
        for pos in frame.values_mut() {
            *pos = t.apply(*pos);
        }
    }
    out.metadata.notes.push(format!(
        "applied transform matrix={:?} translation=({}, {})",
        t.matrix, t.translation.x, t.translation.y
    ));
    Ok(out)
}
