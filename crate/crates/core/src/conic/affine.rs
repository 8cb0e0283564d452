use nalgebra::{Matrix2, Matrix3, Vector2};
use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{GeometryError, Result};

/// `p ↦ linear · p + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    /// Row-major 2×2 matrix.
    pub linear: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

impl AffineMap {
    pub fn new(linear: [[f64; 2]; 2], translation: [f64; 2]) -> Result<Self> {
        let map = Self {
            linear,
            translation,
        };
        let det = map.det();
        let scale = linear
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if !det.is_finite() || det.abs() <= 1e-15 * scale * scale || scale == 0.0 {
            return Err(GeometryError::SingularMap { det });
        }
        Ok(map)
    }

    /// A central (translation-free) map.
    pub fn linear(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        Self::new([[m11, m12], [m21, m22]], [0.0, 0.0])
    }

    pub fn identity() -> Self {
        Self {
            linear: [[1.0, 0.0], [0.0, 1.0]],
            translation: [0.0, 0.0],
        }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            linear: [[c, -s], [s, c]],
            translation: [0.0, 0.0],
        }
    }

    pub fn scaling(sx: f64, sy: f64) -> Result<Self> {
        Self::linear(sx, 0.0, 0.0, sy)
    }

    /// Horizontal shear `[[1, k], [0, 1]]`.
    pub fn shear(k: f64) -> Self {
        Self {
            linear: [[1.0, k], [0.0, 1.0]],
            translation: [0.0, 0.0],
        }
    }

    pub fn det(&self) -> f64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    pub fn is_central(&self) -> bool {
        self.translation == [0.0, 0.0]
    }

    pub fn apply(&self, p: Point) -> Point {
        let m = &self.linear;
        Point::new(
            m[0][0] * p.x + m[0][1] * p.y + self.translation[0],
            m[1][0] * p.x + m[1][1] * p.y + self.translation[1],
        )
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let a = self.matrix2();
        let b = inner.matrix2();
        let lin = a * b;
        let tr = a * Vector2::from(inner.translation) + Vector2::from(self.translation);
        AffineMap {
            linear: [[lin[(0, 0)], lin[(0, 1)]], [lin[(1, 0)], lin[(1, 1)]]],
            translation: [tr[0], tr[1]],
        }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self
            .matrix2()
            .try_inverse()
            .ok_or(GeometryError::SingularMap { det: self.det() })?;
        let tr = -(inv * Vector2::from(self.translation));
        Ok(AffineMap {
            linear: [[inv[(0, 0)], inv[(0, 1)]], [inv[(1, 0)], inv[(1, 1)]]],
            translation: [tr[0], tr[1]],
        })
    }

    pub(crate) fn matrix2(&self) -> Matrix2<f64> {
        let m = &self.linear;
        Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    /// Homogeneous 3×3 form acting on column vectors `(x, y, 1)`.
    pub(crate) fn homogeneous(&self) -> Matrix3<f64> {
        let m = &self.linear;
        let t = &self.translation;
        Matrix3::new(
            m[0][0], m[0][1], t[0], //
            m[1][0], m[1][1], t[1], //
            0.0, 0.0, 1.0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            AffineMap::linear(1.0, 2.0, 2.0, 4.0),
            Err(GeometryError::SingularMap { .. })
        ));
        assert!(AffineMap::linear(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let a = AffineMap::new([[1.3, 0.2], [-0.4, 0.8]], [0.5, -1.0]).unwrap();
        let b = AffineMap::rotation(0.7);
        let p = Point::new(0.3, -2.1);
        let ab = a.compose(&b);
        let q = ab.apply(p);
        let expect = a.apply(b.apply(p));
        assert!(q.distance(expect) < 1e-14);
        let back = ab.inverse().unwrap().apply(q);
        assert!(back.distance(p) < 1e-14);
        assert!((ab.det() - a.det() * b.det()).abs() < 1e-14);
    }
}
