use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// A point (or free vector) in the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point, s: f64) -> Point {
        self + (other - self) * s
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Homogeneous line `l x + m y + n = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl Line {
    pub fn new(l: f64, m: f64, n: f64) -> Result<Self> {
        if l == 0.0 && m == 0.0 {
            return Err(GeometryError::DegenerateLine);
        }
        Ok(Self { l, m, n })
    }

    pub fn through(p: Point, q: Point) -> Result<Self> {
        let d = q - p;
        Line::new(-d.y, d.x, d.y * p.x - d.x * p.y)
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.l * p.x + self.m * p.y + self.n
    }

    /// Signed Euclidean distance, positive on the side the normal `(l, m)` points to.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.eval(p) / self.l.hypot(self.m)
    }

    /// Unit direction vector along the line.
    pub fn direction(&self) -> Point {
        let k = self.l.hypot(self.m);
        Point::new(-self.m / k, self.l / k)
    }

    /// Rescaled so that `l² + m² + n² = 1`.
    pub fn normalized(&self) -> Line {
        let k = (self.l * self.l + self.m * self.m + self.n * self.n).sqrt();
        Line {
            l: self.l / k,
            m: self.m / k,
            n: self.n / k,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.l, self.m, self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_line_rejected() {
        assert_eq!(Line::new(0.0, 0.0, 1.0), Err(GeometryError::DegenerateLine));
        assert!(Line::through(Point::new(1.0, 1.0), Point::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn line_through_two_points() {
        let p = Point::new(1.0, 2.0);
        let q = Point::new(-3.0, 0.5);
        let line = Line::through(p, q).unwrap();
        assert!(line.eval(p).abs() < 1e-15);
        assert!(line.eval(q).abs() < 1e-15);
        let d = line.direction();
        assert!((d.cross(q - p)).abs() < 1e-12);
    }
}
