//! Triangle metrics, trilinear coordinates, excircles and anticevian triangles.
//!
//! Vertices are stored counterclockwise. Side `i` is the sideline opposite
//! `P_i`, and signed distances to it are positive on the side holding `P_i`,
//! so interior points have trilinears `[+ : + : +]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conic::{Line, Point};
use crate::error::{GeometryError, Result};

/// Triangles with `area < DEGENERACY_RATIO · longest_side²` are rejected.
pub const DEGENERACY_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    p: [Point; 3],
}

/// `s_i` is the length of the side opposite `P_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideLengths {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl SideLengths {
    pub fn as_array(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn semiperimeter(&self) -> f64 {
        (self.s1 + self.s2 + self.s3) / 2.0
    }

    /// `s − s_i` for each side, evaluated as `(s_j + s_k − s_i) / 2`.
    pub fn gaps(&self) -> [f64; 3] {
        let [a, b, c] = self.as_array();
        [(b + c - a) / 2.0, (c + a - b) / 2.0, (a + b - c) / 2.0]
    }

    /// `r/R` written purely in side lengths.
    pub fn rho(&self) -> f64 {
        let [a, b, c] = self.as_array();
        (a + b - c) * (a - b + c) * (-a + b + c) / (2.0 * a * b * c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub area: f64,
    pub semiperimeter: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excircles {
    pub radii: [f64; 3],
    pub areas: [f64; 3],
}

impl Triangle {
    /// Builds a triangle, reordering to counterclockwise (`P2 ↔ P3` if needed).
    pub fn new(p1: Point, p2: Point, p3: Point) -> Result<Self> {
        let twice = (p2 - p1).cross(p3 - p1);
        let longest = p1.distance(p2).max(p2.distance(p3)).max(p3.distance(p1));
        let area = twice.abs() / 2.0;
        if !area.is_finite() || area < DEGENERACY_RATIO * longest * longest || longest == 0.0 {
            return Err(GeometryError::DegenerateTriangle { area, longest });
        }
        let p = if twice > 0.0 {
            [p1, p2, p3]
        } else {
            [p1, p3, p2]
        };
        Ok(Self { p })
    }

    pub fn vertices(&self) -> [Point; 3] {
        self.p
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.p[i]
    }

    pub fn sidelengths(&self) -> SideLengths {
        let [p1, p2, p3] = self.p;
        SideLengths {
            s1: p2.distance(p3),
            s2: p3.distance(p1),
            s3: p1.distance(p2),
        }
    }

    pub fn area(&self) -> f64 {
        let [p1, p2, p3] = self.p;
        (p2 - p1).cross(p3 - p1) / 2.0
    }

    pub fn metrics(&self) -> Metrics {
        let sides = self.sidelengths();
        let area = self.area();
        let s = sides.semiperimeter();
        let inradius = area / s;
        let circumradius = sides.s1 * sides.s2 * sides.s3 / (4.0 * area);
        Metrics {
            area,
            semiperimeter: s,
            inradius,
            circumradius,
            rho: inradius / circumradius,
        }
    }

    /// Sideline opposite `P_{i+1}`, oriented so `P_{i+1}` is on its positive side.
    pub fn sideline(&self, i: usize) -> Line {
        Line::through(self.p[(i + 1) % 3], self.p[(i + 2) % 3])
            .expect("nondegenerate triangle has distinct vertices")
    }

    pub fn signed_distances(&self, p: Point) -> [f64; 3] {
        [0, 1, 2].map(|i| self.sideline(i).signed_distance(p))
    }

    pub fn centroid(&self) -> Point {
        let [p1, p2, p3] = self.p;
        Point::new((p1.x + p2.x + p3.x) / 3.0, (p1.y + p2.y + p3.y) / 3.0)
    }

    pub fn incenter(&self) -> Point {
        self.trilinear_to_cartesian(&Trilinear::INCENTER)
            .expect("incenter is never at infinity")
    }

    pub fn circumcenter(&self) -> Point {
        let [a, b, c] = self.p;
        let (b, c) = (b - a, c - a);
        let d = 2.0 * b.cross(c);
        let (bb, cc) = (b.dot(b), c.dot(c));
        a + Point::new((c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d)
    }

    /// Converts via barycentrics `(s1·u : s2·v : s3·w)`.
    pub fn trilinear_to_cartesian(&self, q: &Trilinear) -> Result<Point> {
        let sides = self.sidelengths();
        let w = [sides.s1 * q.u, sides.s2 * q.v, sides.s3 * q.w];
        let sum = w[0] + w[1] + w[2];
        let mag = w.iter().map(|x| x.abs()).sum::<f64>();
        if sum.abs() <= 1e-12 * mag || sum == 0.0 {
            return Err(GeometryError::PointAtInfinity);
        }
        let [p1, p2, p3] = self.p;
        Ok(Point::new(
            (w[0] * p1.x + w[1] * p2.x + w[2] * p3.x) / sum,
            (w[0] * p1.y + w[1] * p2.y + w[2] * p3.y) / sum,
        ))
    }

    /// Signed sideline distances, rescaled by a positive factor to `max |·| = 1`.
    pub fn cartesian_to_trilinear(&self, p: Point) -> Trilinear {
        let [u, v, w] = self.signed_distances(p);
        Trilinear { u, v, w }.scaled_to_unit()
    }

    /// Vertices of the anticevian triangle of an interior point `x`:
    /// `[−u:v:w]`, `[u:−v:w]`, `[u:v:−w]`.
    pub fn anticevian_vertices(&self, x: &Trilinear) -> Result<[Point; 3]> {
        let x = x.interior()?;
        let mut out = [Point::ORIGIN; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.trilinear_to_cartesian(&x.flipped(i))?;
        }
        Ok(out)
    }

    pub fn excenters(&self) -> [Point; 3] {
        self.anticevian_vertices(&Trilinear::INCENTER)
            .expect("excenters of a nondegenerate triangle are finite")
    }

    /// Exradii `S/(s − s_i)` and excircle areas `π s (s−s_j)(s−s_k)/(s−s_i)`.
    pub fn excircles(&self) -> Result<Excircles> {
        let sides = self.sidelengths();
        let s = sides.semiperimeter();
        let area = self.area();
        let g = sides.gaps();
        let mut radii = [0.0; 3];
        let mut areas = [0.0; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            radii[i] = area / g[i];
            areas[i] = PI * s * g[j] * g[k] / g[i];
            if g[i].is_nan() || g[i] <= 0.0 || !radii[i].is_finite() || !areas[i].is_finite() {
                return Err(GeometryError::ExradiusOverflow {
                    index: i + 1,
                    gap: g[i],
                });
            }
        }
        Ok(Excircles { radii, areas })
    }

    pub fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Result<Triangle> {
        let [p1, p2, p3] = self.p;
        Triangle::new(f(p1), f(p2), f(p3))
    }
}

/// Homogeneous trilinear coordinates `[u : v : w]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trilinear {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl Trilinear {
    pub const INCENTER: Trilinear = Trilinear {
        u: 1.0,
        v: 1.0,
        w: 1.0,
    };

    pub fn new(u: f64, v: f64, w: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite() && w.is_finite()) || (u == 0.0 && v == 0.0 && w == 0.0)
        {
            return Err(GeometryError::InvalidParameter(format!(
                "trilinears must be finite and not all zero, got [{u}:{v}:{w}]"
            )));
        }
        Ok(Self { u, v, w })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    /// Positive rescale to `max |·| = 1`.
    pub fn scaled_to_unit(&self) -> Trilinear {
        let m = self.u.abs().max(self.v.abs()).max(self.w.abs());
        Trilinear {
            u: self.u / m,
            v: self.v / m,
            w: self.w / m,
        }
    }

    /// Display form: `max |·| = 1` with the first nonzero coordinate positive.
    pub fn canonical(&self) -> Trilinear {
        let t = self.scaled_to_unit();
        let first = t.as_array().into_iter().find(|c| *c != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            Trilinear {
                u: -t.u,
                v: -t.v,
                w: -t.w,
            }
        } else {
            t
        }
    }

    /// Equality as projective points (any nonzero scale).
    pub fn same_point(&self, other: &Trilinear, tol: f64) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        (a.u - b.u).abs() <= tol && (a.v - b.v).abs() <= tol && (a.w - b.w).abs() <= tol
    }

    /// Copy with coordinate `i` negated.
    pub fn flipped(&self, i: usize) -> Trilinear {
        let mut c = self.as_array();
        c[i] = -c[i];
        Trilinear {
            u: c[0],
            v: c[1],
            w: c[2],
        }
    }

    /// Sign-normalized copy with all coordinates strictly positive.
    pub fn interior(&self) -> Result<Trilinear> {
        let t = if self.u <= 0.0 && self.v <= 0.0 && self.w <= 0.0 {
            Trilinear {
                u: -self.u,
                v: -self.v,
                w: -self.w,
            }
        } else {
            *self
        };
        if t.u > 0.0 && t.v > 0.0 && t.w > 0.0 {
            Ok(t)
        } else {
            Err(GeometryError::NotInterior {
                u: self.u,
                v: self.v,
                w: self.w,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn equilateral(side: f64, center: Point, phase: f64) -> Triangle {
        let r = side / 3f64.sqrt();
        let v = |k: f64| {
            let a = phase + 2.0 * PI * k / 3.0;
            center + Point::new(a.cos(), a.sin()) * r
        };
        Triangle::new(v(0.0), v(1.0), v(2.0)).unwrap()
    }

    fn right_345() -> Triangle {
        Triangle::new(
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(0.0, 3.0),
        )
        .unwrap()
    }

    /// Labelled so that (s1, s2, s3) = (3, 4, 5).
    fn right_345_labelled() -> Triangle {
        Triangle::new(
            Point::new(4.0, 0.0),
            Point::new(0.0, 3.0),
            Point::new(0.0, 0.0),
        )
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn sidelengths_cases() {
        let s = equilateral(1.0, Point::new(3.0, -2.0), 0.77).sidelengths();
        for x in s.as_array() {
            assert!((x - 1.0).abs() < 1e-14);
        }
        let s = right_345().sidelengths();
        assert_eq!(s.as_array(), [5.0, 3.0, 4.0]);
        assert!(matches!(
            Triangle::new(
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(2.0, 0.0)
            ),
            Err(GeometryError::DegenerateTriangle { .. })
        ));
    }

    #[test]
    fn clockwise_input_is_reordered() {
        let t = Triangle::new(
            Point::new(0.0, 0.0),
            Point::new(0.0, 3.0),
            Point::new(4.0, 0.0),
        )
        .unwrap();
        assert!(t.area() > 0.0);
        assert_eq!(t.vertex(1), Point::new(4.0, 0.0));
    }

    #[test]
    fn metrics_equilateral() {
        let m = equilateral(1.0, Point::ORIGIN, 0.1).metrics();
        assert!(rel(m.inradius, 1.0 / (2.0 * 3f64.sqrt())) < 1e-14);
        assert!(rel(m.circumradius, 1.0 / 3f64.sqrt()) < 1e-14);
        assert!(rel(m.rho, 0.5) < 1e-14);
    }

    #[test]
    fn metrics_345() {
        let t = right_345();
        let m = t.metrics();
        // independent: inradius of a right triangle is (leg1 + leg2 − hyp)/2,
        // circumradius is hyp/2.
        assert!(rel(m.area, 6.0) < 1e-15);
        assert!(rel(m.semiperimeter, 6.0) < 1e-15);
        assert!(rel(m.inradius, (3.0 + 4.0 - 5.0) / 2.0) < 1e-15);
        assert!(rel(m.circumradius, 5.0 / 2.0) < 1e-15);
        assert!(rel(m.rho, 0.4) < 1e-15);
        assert!(rel(t.sidelengths().rho(), 0.4) < 1e-15);
        assert!(t.incenter().distance(Point::new(1.0, 1.0)) < 1e-15);
        assert!(t.circumcenter().distance(Point::new(2.0, 1.5)) < 1e-15);
    }

    #[test]
    fn trilinear_conversions() {
        let t = right_345();
        let inc = t.trilinear_to_cartesian(&Trilinear::INCENTER).unwrap();
        let d = t.signed_distances(inc);
        assert!((d[0] - d[1]).abs() < 1e-14 && (d[1] - d[2]).abs() < 1e-14);
        assert!(t
            .cartesian_to_trilinear(inc)
            .same_point(&Trilinear::INCENTER, 1e-14));
        let v = t.cartesian_to_trilinear(t.vertex(0));
        assert!(v.same_point(&Trilinear::new(1.0, 0.0, 0.0).unwrap(), 1e-14));

        let e = t
            .trilinear_to_cartesian(&Trilinear::new(-1.0, 1.0, 1.0).unwrap())
            .unwrap();
        let d = t.signed_distances(e);
        assert!(d[0] < 0.0 && d[1] > 0.0 && d[2] > 0.0);
        assert!((d[0] + d[1]).abs() < 1e-13 && (d[1] - d[2]).abs() < 1e-13);
    }

    #[test]
    fn equilateral_excenter_distance() {
        let t = equilateral(1.0, Point::ORIGIN, 0.3);
        let big_r = t.metrics().circumradius;
        let ex = t.excenters();
        for (i, e) in ex.iter().enumerate() {
            assert!((e.norm() - 2.0 * big_r).abs() < 1e-14);
            // excenter i sits opposite vertex i, i.e. 180° (= 60° mod 120°) away
            let dot = e.dot(t.vertex(i)) / (e.norm() * t.vertex(i).norm());
            assert!((dot + 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn point_at_infinity() {
        let t = equilateral(1.0, Point::ORIGIN, 0.0);
        let q = Trilinear::new(1.0, -1.0, 0.0).unwrap();
        assert_eq!(
            t.trilinear_to_cartesian(&q),
            Err(GeometryError::PointAtInfinity)
        );
    }

    #[test]
    fn anticevian_requires_interior_point() {
        let t = right_345();
        let q = Trilinear::new(1.0, -0.5, 1.0).unwrap();
        assert!(matches!(
            t.anticevian_vertices(&q),
            Err(GeometryError::NotInterior { .. })
        ));
        let neg = Trilinear::new(-1.0, -1.0, -1.0).unwrap();
        assert_eq!(t.anticevian_vertices(&neg).unwrap(), t.excenters());
    }

    #[test]
    fn excentral_vertices_345() {
        let t = right_345();
        let ex = t.excircles().unwrap();
        for (i, e) in t.excenters().iter().enumerate() {
            let d = t.signed_distances(*e);
            let negatives = d.iter().filter(|x| **x < 0.0).count();
            assert_eq!(negatives, 1);
            assert!(d[i] < 0.0);
            for x in d {
                assert!((x.abs() - ex.radii[i]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn excircles_345() {
        let ex = right_345_labelled().excircles().unwrap();
        let expect_r = [2.0, 3.0, 6.0];
        let expect_a = [4.0 * PI, 9.0 * PI, 36.0 * PI];
        for i in 0..3 {
            assert!(rel(ex.radii[i], expect_r[i]) < 1e-15);
            assert!(rel(ex.areas[i], expect_a[i]) < 1e-15);
        }
    }

    #[test]
    fn excircles_equilateral() {
        let ex = equilateral(1.0, Point::ORIGIN, 0.0).excircles().unwrap();
        for i in 0..3 {
            assert!(rel(ex.radii[i], 3f64.sqrt() / 2.0) < 1e-14);
            assert!(rel(ex.areas[i], 3.0 * PI / 4.0) < 1e-14);
        }
    }

    #[test]
    fn needle_triangle_overflows_exradius() {
        // Area 1e-11 passes the degeneracy cutoff, but s − s1 underflows.
        let t = Triangle::new(
            Point::new(0.5, 2e-11),
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
        )
        .unwrap();
        assert!(matches!(
            t.excircles(),
            Err(GeometryError::ExradiusOverflow { index: 1, .. })
        ));
    }

    fn arb_triangle() -> impl Strategy<Value = Triangle> {
        prop::array::uniform6(-10.0..10.0f64).prop_filter_map("well-shaped", |c| {
            // side-length formulas cancel on needles; keep the smallest angle above ~2°
            let t = Triangle::new(
                Point::new(c[0], c[1]),
                Point::new(c[2], c[3]),
                Point::new(c[4], c[5]),
            )
            .ok()?;
            let s = t.sidelengths();
            let longest = s.s1.max(s.s2).max(s.s3);
            (t.area() > 0.02 * longest * longest).then_some(t)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn inradius_reciprocal_sum(t in arb_triangle()) {
            let r = t.metrics().inradius;
            let ex = t.excircles().unwrap();
            let sum: f64 = ex.radii.iter().map(|x| 1.0 / x).sum();
            prop_assert!(rel(sum, 1.0 / r) < 1e-11);
        }

        #[test]
        fn rho_two_formulas(t in arb_triangle()) {
            let m = t.metrics();
            prop_assert!(rel(t.sidelengths().rho(), m.rho) < 1e-12);
            prop_assert!(m.rho <= 0.5 + 1e-15);
        }

        #[test]
        fn excircle_area_forms_agree(t in arb_triangle()) {
            let ex = t.excircles().unwrap();
            for i in 0..3 {
                prop_assert!(rel(ex.areas[i], PI * ex.radii[i] * ex.radii[i]) < 1e-12);
            }
        }

        #[test]
        fn trilinear_round_trip(t in arb_triangle(), w in prop::array::uniform3(0.05..1.0f64)) {
            let [p1, p2, p3] = t.vertices();
            let sum = w[0] + w[1] + w[2];
            let p = (p1 * w[0] + p2 * w[1] + p3 * w[2]) * (1.0 / sum);
            let q = t.cartesian_to_trilinear(p);
            prop_assert!(q.u > 0.0 && q.v > 0.0 && q.w > 0.0);
            let back = t.trilinear_to_cartesian(&q).unwrap();
            prop_assert!(back.distance(p) < 1e-10 * (1.0 + p.norm()));
        }
    }
}
