//! General conics, ellipses, tangents from a point and affine images.
//!
//! A [`Conic`] is the zero set of `A x² + B xy + C y² + D x + E y + F`.
//! Coefficients are homogeneous, so every conic is stored scaled to
//! `max |coefficient| = 1` with its largest-magnitude coefficient positive.
//! All comparisons between conics are therefore up to scale.

mod affine;
mod point;

use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

pub use affine::AffineMap;
pub use point::{Line, Point};

use crate::error::{GeometryError, Result};

/// `|det M|` below this (after normalization) marks a degenerate conic.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// `Ax² + Bxy + Cy² + Dx + Ey + F = 0`, normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conic {
    coeffs: [f64; 6],
}

impl Conic {
    /// Builds a conic from raw coefficients `[A, B, C, D, E, F]`.
    pub fn new(coeffs: [f64; 6]) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NotAConic);
        }
        if coeffs[0] == 0.0 && coeffs[1] == 0.0 && coeffs[2] == 0.0 {
            return Err(GeometryError::NotAConic);
        }
        let (idx, max) = coeffs
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |(bi, bv), (i, v)| {
                if v.abs() > bv {
                    (i, v.abs())
                } else {
                    (bi, bv)
                }
            });
        let k = max.copysign(coeffs[idx]);
        Ok(Self {
            coeffs: coeffs.map(|c| c / k),
        })
    }

    /// Builds a conic from its symmetric 3×3 matrix.
    pub fn from_matrix(m: &Matrix3<f64>) -> Result<Self> {
        Self::new([
            m[(0, 0)],
            m[(0, 1)] + m[(1, 0)],
            m[(1, 1)],
            m[(0, 2)] + m[(2, 0)],
            m[(1, 2)] + m[(2, 1)],
            m[(2, 2)],
        ])
    }

    pub fn coeffs(&self) -> [f64; 6] {
        self.coeffs
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        let [a, b, c, d, e, f] = self.coeffs;
        Matrix3::new(
            a,
            b / 2.0,
            d / 2.0, //
            b / 2.0,
            c,
            e / 2.0, //
            d / 2.0,
            e / 2.0,
            f,
        )
    }

    /// Dual conic (adjugate matrix); a line `ℓ` is tangent iff `ℓᵀ M* ℓ = 0`.
    pub fn dual_matrix(&self) -> Matrix3<f64> {
        adjugate(&self.matrix())
    }

    pub fn eval(&self, p: Point) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f
    }

    /// `B² − 4AC`; negative for ellipses.
    pub fn discriminant(&self) -> f64 {
        let [a, b, c, ..] = self.coeffs;
        b * b - 4.0 * a * c
    }

    pub fn is_degenerate(&self) -> bool {
        self.matrix().determinant().abs() < DEGENERACY_TOLERANCE
    }

    /// Center of a central conic.
    pub fn center(&self) -> Option<Point> {
        let [a, b, c, d, e, _] = self.coeffs;
        let det = 4.0 * a * c - b * b;
        if det == 0.0 {
            return None;
        }
        Some(Point::new(
            (b * e - 2.0 * c * d) / det,
            (b * d - 2.0 * a * e) / det,
        ))
    }

    /// Scaled copy; the normalized representative is unchanged for `k ≠ 0`.
    pub fn scaled(&self, k: f64) -> Result<Conic> {
        Conic::new(self.coeffs.map(|c| c * k))
    }

    /// Equality up to a nonzero scale factor.
    pub fn approx_eq(&self, other: &Conic, tol: f64) -> bool {
        let same = |sign: f64| {
            self.coeffs
                .iter()
                .zip(other.coeffs.iter())
                .all(|(x, y)| (x - sign * y).abs() <= tol)
        };
        same(1.0) || same(-1.0)
    }

    fn ellipse_parts(&self) -> Result<EllipseParts> {
        if self.discriminant() >= 0.0 || self.is_degenerate() {
            return Err(GeometryError::NotAnEllipse);
        }
        let [mut a, mut b, mut c, ..] = self.coeffs;
        let center = self.center().ok_or(GeometryError::NotAnEllipse)?;
        let [_, _, _, d, e, f] = self.coeffs;
        let mut f0 = f + (d * center.x + e * center.y) / 2.0;
        if a + c < 0.0 {
            a = -a;
            b = -b;
            c = -c;
            f0 = -f0;
        }
        if f0.is_nan() || f0 >= 0.0 {
            return Err(GeometryError::NotAnEllipse);
        }
        let det_q = a * c - b * b / 4.0;
        let mean = (a + c) / 2.0;
        let half_gap = ((a - c) / 2.0).hypot(b / 2.0);
        let lambda_big = mean + half_gap;
        let lambda_small = det_q / lambda_big;
        Ok(EllipseParts {
            center,
            level: -f0,
            det_q,
            lambda_small,
            lambda_big,
            a,
            b,
            c,
        })
    }

    /// Recovers center, sorted semi-axes and rotation (in `[0, π)`).
    pub fn to_ellipse(&self) -> Result<Ellipse> {
        let parts = self.ellipse_parts()?;
        let major = (parts.level / parts.lambda_small).sqrt();
        let minor = (parts.level / parts.lambda_big).sqrt();
        let rotation = if parts.lambda_big == parts.lambda_small {
            0.0
        } else {
            (0.5 * (-parts.b).atan2(parts.c - parts.a)).rem_euclid(PI)
        };
        Ellipse::new(parts.center, major, minor.min(major), rotation)
    }

    /// Enclosed area of a real ellipse.
    pub fn area(&self) -> Result<f64> {
        let parts = self.ellipse_parts()?;
        Ok(PI * parts.level / parts.det_q.sqrt())
    }

    /// Level of `p` relative to the ellipse: `< 1` inside, `1` on, `> 1` outside.
    pub fn ellipse_level(&self, p: Point) -> Result<f64> {
        let parts = self.ellipse_parts()?;
        let d = p - parts.center;
        let q = parts.a * d.x * d.x + parts.b * d.x * d.y + parts.c * d.y * d.y;
        Ok(q / parts.level)
    }

    /// `|ℓᵀ M* ℓ|` with `ℓ` unit-normalized and `M*` scaled to unit max entry.
    pub fn tangency_residual(&self, line: &Line) -> f64 {
        let dual = self.dual_matrix();
        let scale = dual.amax();
        let l = line.normalized().as_array();
        let v = nalgebra::Vector3::new(l[0], l[1], l[2]);
        (v.transpose() * dual * v)[(0, 0)].abs() / scale
    }

    /// Point where `line` touches the conic (pole of the line).
    pub fn touch_point(&self, line: &Line) -> Option<Point> {
        let l = line.as_array();
        let p = self.dual_matrix() * nalgebra::Vector3::new(l[0], l[1], l[2]);
        (p[2] != 0.0).then(|| Point::new(p[0] / p[2], p[1] / p[2]))
    }

    /// The two tangent lines to this ellipse through an exterior point.
    ///
    /// Lines through `p` are `(l, m, −l·px − m·py)`; substituting into the
    /// dual form gives a homogeneous quadratic in `(l, m)` solved in closed
    /// form, normalizing on whichever of `l`, `m` keeps the leading
    /// coefficient largest (so vertical tangents need no special case).
    pub fn tangent_lines_from(&self, p: Point) -> Result<(Line, Line)> {
        if self.ellipse_level(p)? <= 1.0 + 1e-12 {
            return Err(GeometryError::PointInsideConic);
        }
        let dual = self.dual_matrix();
        let dual = dual / dual.amax();
        // K = Lᵀ M* L with L = [[1, 0], [0, 1], [−px, −py]].
        let col = |i: usize| nalgebra::Vector3::new(dual[(0, i)], dual[(1, i)], dual[(2, i)]);
        let lift = [
            nalgebra::Vector3::new(1.0, 0.0, -p.x),
            nalgebra::Vector3::new(0.0, 1.0, -p.y),
        ];
        let k = |i: usize, j: usize| {
            let mv = col(0) * lift[j][0] + col(1) * lift[j][1] + col(2) * lift[j][2];
            lift[i].dot(&mv)
        };
        let (k11, k12, k22) = (k(0, 0), k(0, 1), k(1, 1));
        let disc = k12 * k12 - k11 * k22;
        if disc.is_nan() || disc <= 0.0 {
            return Err(GeometryError::PointInsideConic);
        }
        let root = disc.sqrt();
        let q = -(k12 + root.copysign(k12));
        let dirs: [(f64, f64); 2] = if k11 == 0.0 && k22 == 0.0 {
            [(1.0, 0.0), (0.0, 1.0)]
        } else if k11.abs() >= k22.abs() {
            // m = 1: k11 l² + 2 k12 l + k22 = 0
            [(q / k11, 1.0), (k22 / q, 1.0)]
        } else {
            // l = 1: k22 m² + 2 k12 m + k11 = 0
            [(1.0, q / k22), (1.0, k11 / q)]
        };
        let make = |(l, m): (f64, f64)| Line::new(l, m, -(l * p.x + m * p.y));
        Ok((make(dirs[0])?, make(dirs[1])?))
    }

    /// Image of the conic under `map`: zero set becomes `map(zero set)`.
    pub fn transformed(&self, map: &AffineMap) -> Result<Conic> {
        let det = map.det();
        if det == 0.0 || !det.is_finite() {
            return Err(GeometryError::SingularMap { det });
        }
        let inv = map
            .homogeneous()
            .try_inverse()
            .ok_or(GeometryError::SingularMap { det })?;
        Conic::from_matrix(&(inv.transpose() * self.matrix() * inv))
    }

    /// Samples `n` points around an ellipse, for drawing.
    pub fn sample_ellipse(&self, n: usize) -> Result<Vec<Point>> {
        let e = self.to_ellipse()?;
        Ok((0..n)
            .map(|k| e.point_at(2.0 * PI * k as f64 / n as f64))
            .collect())
    }
}

struct EllipseParts {
    center: Point,
    /// `−F'` (value at center, sign-fixed), positive.
    level: f64,
    det_q: f64,
    lambda_small: f64,
    lambda_big: f64,
    a: f64,
    b: f64,
    c: f64,
}

fn adjugate(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

/// Center, semi-axes `a ≥ b > 0` and rotation of the major axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: Point,
    pub a: f64,
    pub b: f64,
    pub rotation: f64,
}

impl Ellipse {
    pub fn new(center: Point, a: f64, b: f64, rotation: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && a >= b) {
            return Err(GeometryError::InvalidAxes(format!(
                "ellipse needs a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        if !center.is_finite() || !rotation.is_finite() {
            return Err(GeometryError::InvalidParameter(
                "ellipse center and rotation must be finite".into(),
            ));
        }
        Ok(Self {
            center,
            a,
            b,
            rotation,
        })
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        Self::new(center, radius, radius, 0.0)
    }

    pub fn area(&self) -> f64 {
        PI * self.a * self.b
    }

    /// `center + R(rotation) · (a cos t, b sin t)`.
    pub fn point_at(&self, t: f64) -> Point {
        let (st, ct) = t.sin_cos();
        let (sr, cr) = self.rotation.sin_cos();
        let (x, y) = (self.a * ct, self.b * st);
        Point::new(
            self.center.x + cr * x - sr * y,
            self.center.y + sr * x + cr * y,
        )
    }

    pub fn to_conic(&self) -> Conic {
        let (s, c) = self.rotation.sin_cos();
        let ia = 1.0 / (self.a * self.a);
        let ib = 1.0 / (self.b * self.b);
        let qa = c * c * ia + s * s * ib;
        let qb = 2.0 * c * s * (ia - ib);
        let qc = s * s * ia + c * c * ib;
        let (x0, y0) = (self.center.x, self.center.y);
        let d = -(2.0 * qa * x0 + qb * y0);
        let e = -(qb * x0 + 2.0 * qc * y0);
        let f = qa * x0 * x0 + qb * x0 * y0 + qc * y0 * y0 - 1.0;
        Conic::new([qa, qb, qc, d, e, f]).expect("ellipse has a nonzero quadratic part")
    }

    /// Same center and axes, rotation within `tol` modulo π.
    pub fn approx_eq(&self, other: &Ellipse, tol: f64) -> bool {
        let scale = self.a.max(other.a);
        let close = |x: f64, y: f64| (x - y).abs() <= tol * scale;
        let mut dr = (self.rotation - other.rotation).rem_euclid(PI);
        if dr > PI / 2.0 {
            dr = PI - dr;
        }
        let round = (self.a - self.b).abs() <= tol * scale;
        close(self.center.x, other.center.x)
            && close(self.center.y, other.center.y)
            && close(self.a, other.a)
            && close(self.b, other.b)
            && (round || dr <= tol)
    }
}
