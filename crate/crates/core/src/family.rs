//! Concentric ellipse pairs that admit Poncelet 3-periodics, and the
//! tangent-chord construction of their orbits.
//!
//! Every pair here is centered at the origin. Axis-aligned pairs close for
//! 3-periodics exactly when the caustic semi-axes satisfy
//! `a_c/a + b_c/b = 1`; affine images of such pairs close as well.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conic::{AffineMap, Conic, Ellipse, Line, Point};
use crate::error::{GeometryError, Result};
use crate::exec::Execution;
use crate::triangle::Triangle;

/// Closure residual bar, relative to the outer major semi-axis.
pub const CLOSURE_TOLERANCE: f64 = 1e-9;
/// Per-side tangency bar for orbit chords.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;
/// Number of probe parameters checked when a pair is built.
pub const VALIDATION_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Incircle,
    AxisAligned,
    Confocal,
    Homothetic,
    AffineImage,
}

impl PairKind {
    pub fn name(self) -> &'static str {
        match self {
            PairKind::Incircle => "incircle",
            PairKind::AxisAligned => "axis_aligned",
            PairKind::Confocal => "confocal",
            PairKind::Homothetic => "homothetic",
            PairKind::AffineImage => "affine_image",
        }
    }
}

/// Outer ellipse and inner caustic sharing the origin as center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentricPair {
    outer: Ellipse,
    caustic: Conic,
    kind: PairKind,
    /// Accumulated map from `base` (affine images only).
    provenance: Option<AffineMap>,
    /// The axis-aligned pair this one was mapped from.
    base: Option<Box<ConcentricPair>>,
    /// Caustic semi-axes along x and y for axis-aligned pairs.
    caustic_axes: Option<(f64, f64)>,
}

/// One 3-periodic of a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub t: f64,
    pub triangle: Triangle,
    pub closure_residual: f64,
}

/// A sweep entry; failed parameters are kept with their error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSample {
    pub t: f64,
    pub orbit: Result<OrbitSample>,
}

impl SweepSample {
    pub fn valid(&self) -> Option<&OrbitSample> {
        self.orbit.as_ref().ok()
    }
}

fn check_axes(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && b > 0.0 && a > b) {
        return Err(GeometryError::InvalidAxes(format!(
            "need a > b > 0, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

fn axis_aligned_conic(ax: f64, by: f64) -> Conic {
    Conic::new([1.0 / (ax * ax), 0.0, 1.0 / (by * by), 0.0, 0.0, -1.0])
        .expect("positive semi-axes give a conic")
}

impl ConcentricPair {
    /// Outer ellipse `(a, b)` around the circle of radius `ab/(a+b)`.
    pub fn incircle(a: f64, b: f64) -> Result<Self> {
        check_axes(a, b)?;
        let r = a * b / (a + b);
        Self::root(a, b, r, r, PairKind::Incircle)
    }

    /// Axis-aligned caustic with `b_c = b(1 − a_c/a)`.
    pub fn axis_aligned(a: f64, b: f64, a_c: f64) -> Result<Self> {
        if !(a.is_finite() && b > 0.0 && a >= b) {
            return Err(GeometryError::InvalidAxes(format!(
                "need a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        if !(a_c > 0.0 && a_c < a) {
            return Err(GeometryError::InvalidAxes(format!(
                "need 0 < a_c < a, got a_c = {a_c}"
            )));
        }
        let b_c = b * (1.0 - a_c / a);
        if !(b_c > 0.0 && b_c < b) {
            return Err(GeometryError::InvalidAxes(format!(
                "derived b_c = {b_c} outside (0, b)"
            )));
        }
        let kind = if (a_c - b_c).abs() <= 1e-15 * a {
            PairKind::Incircle
        } else if (a_c / a - 0.5).abs() <= 1e-15 {
            PairKind::Homothetic
        } else {
            PairKind::AxisAligned
        };
        Self::root(a, b, a_c, b_c, kind)
    }

    /// Outer ellipse and the confocal caustic admitting 3-periodics.
    pub fn confocal(a: f64, b: f64) -> Result<Self> {
        check_axes(a, b)?;
        let (a_c, b_c) = solve_confocal_caustic(a, b)?;
        Self::root(a, b, a_c, b_c, PairKind::Confocal)
    }

    /// Caustic is the outer ellipse scaled by 1/2; `a == b` gives two circles.
    pub fn homothetic(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b > 0.0 && a >= b) {
            return Err(GeometryError::InvalidAxes(format!(
                "need a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        Self::root(a, b, a / 2.0, b / 2.0, PairKind::Homothetic)
    }

    /// Image of `base` under a central affine map.
    pub fn affine_image(base: &ConcentricPair, map: &AffineMap) -> Result<Self> {
        let det = map.det();
        if det == 0.0 || !det.is_finite() {
            return Err(GeometryError::SingularMap { det });
        }
        if !map.is_central() {
            return Err(GeometryError::NonCentralMap);
        }
        let outer = base.outer.to_conic().transformed(map)?.to_ellipse()?;
        let caustic = base.caustic.transformed(map)?;
        let provenance = match &base.provenance {
            Some(inner) => map.compose(inner),
            None => *map,
        };
        let root = base.base.clone().unwrap_or_else(|| Box::new(base.clone()));
        let pair = Self {
            outer,
            caustic,
            kind: PairKind::AffineImage,
            provenance: Some(provenance),
            base: Some(root),
            caustic_axes: None,
        };
        pair.validate()?;
        Ok(pair)
    }

    /// Point `λ` on the diagonal path from the incircle pair `(a, b)`
    /// (`λ = 0`) to its confocal image (`λ = 1`).
    ///
    /// The x-scale is held at 1; the y-scale runs linearly from 1 to the
    /// value making the image confocal. Diagonal maps preserve
    /// `a_c/a = b/(a+b)`, which fixes the confocal target up to scale.
    pub fn continuum(a: f64, b: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(GeometryError::InvalidParameter(format!(
                "continuum parameter must lie in [0, 1], got {lambda}"
            )));
        }
        let base = Self::incircle(a, b)?;
        let map = continuum_map(a, b, lambda)?;
        Self::affine_image(&base, &map)
    }

    /// Builds a pair without the closure probe; for checking invalid pairs.
    pub fn unchecked(outer: Ellipse, caustic: Conic, kind: PairKind) -> Self {
        Self {
            outer,
            caustic,
            kind,
            provenance: None,
            base: None,
            caustic_axes: None,
        }
    }

    /// Axis-aligned pair with a free `b_c`, not validated.
    pub fn axis_aligned_unchecked(a: f64, b: f64, a_c: f64, b_c: f64) -> Result<Self> {
        let outer = Ellipse::new(Point::ORIGIN, a, b, 0.0)?;
        if !(a_c > 0.0 && b_c > 0.0) {
            return Err(GeometryError::InvalidAxes(format!(
                "caustic semi-axes must be positive, got {a_c}, {b_c}"
            )));
        }
        Ok(Self {
            caustic_axes: Some((a_c, b_c)),
            ..Self::unchecked(outer, axis_aligned_conic(a_c, b_c), PairKind::AxisAligned)
        })
    }

    fn root(a: f64, b: f64, a_c: f64, b_c: f64, kind: PairKind) -> Result<Self> {
        let outer = Ellipse::new(Point::ORIGIN, a, b, 0.0)?;
        let pair = Self {
            outer,
            caustic: axis_aligned_conic(a_c, b_c),
            kind,
            provenance: None,
            base: None,
            caustic_axes: Some((a_c, b_c)),
        };
        pair.validate()?;
        Ok(pair)
    }

    /// Concentricity, containment and closure at the probe parameters.
    pub fn validate(&self) -> Result<()> {
        let center = self.caustic.center().ok_or(GeometryError::NotAnEllipse)?;
        let scale = self.outer.a;
        if center.distance(self.outer.center) > 1e-12 * scale {
            return Err(GeometryError::InvalidParameter(format!(
                "caustic center ({}, {}) differs from outer center",
                center.x, center.y
            )));
        }
        let outer = self.outer.to_conic();
        for p in self.caustic.sample_ellipse(64)? {
            if outer.ellipse_level(p)? >= 1.0 {
                return Err(GeometryError::InvalidParameter(
                    "caustic is not strictly inside the outer ellipse".into(),
                ));
            }
        }
        for k in 0..VALIDATION_PROBES {
            let t = 2.0 * PI * k as f64 / VALIDATION_PROBES as f64;
            let residual = self.closure_residual(t)?;
            if residual > self.closure_tolerance() {
                return Err(GeometryError::ClosureFailure { t, residual });
            }
        }
        Ok(())
    }

    pub fn outer(&self) -> &Ellipse {
        &self.outer
    }

    pub fn caustic(&self) -> &Conic {
        &self.caustic
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn provenance(&self) -> Option<&AffineMap> {
        self.provenance.as_ref()
    }

    /// The axis-aligned pair an affine image was mapped from.
    pub fn base(&self) -> Option<&ConcentricPair> {
        self.base.as_deref()
    }

    /// Caustic semi-axes along x and y, for axis-aligned pairs.
    pub fn caustic_axes(&self) -> Option<(f64, f64)> {
        self.caustic_axes
    }

    pub fn center(&self) -> Point {
        self.outer.center
    }

    pub fn closure_tolerance(&self) -> f64 {
        CLOSURE_TOLERANCE * self.outer.a
    }

    /// Kind of the underlying axis-aligned pair.
    pub fn root_kind(&self) -> PairKind {
        self.base.as_ref().map_or(self.kind, |b| b.kind)
    }

    /// Closed-form total blade area `Σ_o` over the family.
    ///
    /// Incircle pairs use `(1 + 4/ρ)·πab` with `ρ = 2r²/(ab)`. Affine images
    /// scale their base value by `|det|`. Other axis-aligned pairs are
    /// diagonal images of an incircle pair with the same `p = a_c/a`, which
    /// gives `πab·(1 + 2/(p(1−p)))`.
    pub fn predicted_sigma_o(&self) -> Option<f64> {
        match (self.kind, &self.base, &self.provenance) {
            (PairKind::AffineImage, Some(base), Some(map)) => {
                base.predicted_sigma_o().map(|v| v * map.det().abs())
            }
            (PairKind::Incircle, ..) => {
                let (a, b) = (self.outer.a, self.outer.b);
                let r = self.caustic_axes?.0;
                let rho = 2.0 * r * r / (a * b);
                Some((1.0 + 4.0 / rho) * PI * a * b)
            }
            (_, None, _) => {
                let (a_c, _) = self.caustic_axes?;
                let (a, b) = (self.outer.a, self.outer.b);
                let p = a_c / a;
                Some(PI * a * b * (1.0 + 2.0 / (p * (1.0 - p))))
            }
            _ => None,
        }
    }

    /// `r/R` over an incircle family: `2r²/(ab)`.
    pub fn predicted_rho(&self) -> Option<f64> {
        if self.kind != PairKind::Incircle {
            return None;
        }
        let r = self.caustic_axes?.0;
        Some(2.0 * r * r / (self.outer.a * self.outer.b))
    }

    /// Incircle radius `ab/(a+b)` and circumradius `(a+b)/2` of an incircle family.
    pub fn predicted_radii(&self) -> Option<(f64, f64)> {
        if self.kind != PairKind::Incircle {
            return None;
        }
        let (a, b) = (self.outer.a, self.outer.b);
        Some((a * b / (a + b), (a + b) / 2.0))
    }

    /// Next vertex: far end of the tangent chord from `p` that keeps the
    /// center on its left (counterclockwise advance).
    fn next_vertex(&self, outer: &Conic, p: Point) -> Result<Point> {
        let (l1, l2) = self.caustic.tangent_lines_from(p).map_err(|e| match e {
            GeometryError::PointInsideConic => GeometryError::TangentFailure { x: p.x, y: p.y },
            other => other,
        })?;
        let o = self.center();
        let mut best: Option<(f64, Point)> = None;
        for line in [l1, l2] {
            let q = far_intersection(outer, p, line.direction());
            let turn = (p - o).cross(q - o);
            if best.is_none_or(|(t, _)| turn > t) {
                best = Some((turn, q));
            }
        }
        Ok(best.expect("two candidates").1)
    }

    fn chase(&self, t: f64) -> Result<([Point; 3], f64)> {
        let outer = self.outer.to_conic();
        let p1 = self.outer.point_at(t);
        let p2 = self.next_vertex(&outer, p1)?;
        let p3 = self.next_vertex(&outer, p2)?;
        let p4 = self.next_vertex(&outer, p3)?;
        Ok(([p1, p2, p3], p4.distance(p1)))
    }

    /// Distance between `outer(t)` and the point reached after three chords.
    pub fn closure_residual(&self, t: f64) -> Result<f64> {
        Ok(self.chase(t)?.1)
    }

    /// The 3-periodic starting at `outer(t)`.
    pub fn orbit(&self, t: f64) -> Result<OrbitSample> {
        let ([p1, p2, p3], residual) = self.chase(t)?;
        if residual.is_nan() || residual > self.closure_tolerance() {
            return Err(GeometryError::ClosureFailure { t, residual });
        }
        let triangle = Triangle::new(p1, p2, p3)?;
        let sample = OrbitSample {
            t,
            triangle,
            closure_residual: residual,
        };
        let worst = self.side_tangency(&sample).into_iter().fold(0.0, f64::max);
        if worst.is_nan() || worst > TANGENCY_TOLERANCE {
            return Err(GeometryError::ClosureFailure { t, residual: worst });
        }
        Ok(sample)
    }

    /// Tangency residual of each side against the caustic.
    pub fn side_tangency(&self, sample: &OrbitSample) -> [f64; 3] {
        let t = &sample.triangle;
        [0, 1, 2].map(|i| {
            Line::through(t.vertex(i), t.vertex((i + 1) % 3))
                .map_or(f64::INFINITY, |l| self.caustic.tangency_residual(&l))
        })
    }

    /// `n` samples at `t = 2πk/n`; failures are kept, not raised.
    pub fn sweep(&self, n: usize) -> Vec<SweepSample> {
        self.sweep_with(n, Execution::default())
    }

    pub fn sweep_with(&self, n: usize, exec: Execution) -> Vec<SweepSample> {
        exec.map_indexed(n, |k| {
            let t = sweep_parameter(k, n);
            SweepSample {
                t,
                orbit: self.orbit(t),
            }
        })
    }
}

pub fn sweep_parameter(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Diagonal map `diag(1, 1 + λ(β − 1))` of the continuum path.
pub fn continuum_map(a: f64, b: f64, lambda: f64) -> Result<AffineMap> {
    check_axes(a, b)?;
    let p = b / (a + b);
    let aspect = ((1.0 - p * p) / (p * (2.0 - p))).sqrt();
    let beta = a * aspect / b;
    AffineMap::scaling(1.0, 1.0 + lambda * (beta - 1.0))
}

/// Far intersection of the line `p + s·d` with `outer`, `p` on `outer`.
fn far_intersection(outer: &Conic, p: Point, d: Point) -> Point {
    let [a, b, c, dd, e, _] = outer.coeffs();
    let alpha = a * d.x * d.x + b * d.x * d.y + c * d.y * d.y;
    let beta = 2.0 * a * p.x * d.x
        + b * (p.x * d.y + p.y * d.x)
        + 2.0 * c * p.y * d.y
        + dd * d.x
        + e * d.y;
    let gamma = outer.eval(p);
    let disc = (beta * beta - 4.0 * alpha * gamma).max(0.0);
    let s = (-beta - disc.sqrt().copysign(beta)) / (2.0 * alpha);
    p + d * s
}

/// Solves `a_c/a + b_c/b = 1` jointly with `a² − a_c² = b² − b_c²`.
///
/// Damped Newton from the homothetic guess `(a/2, b/2)`; falls back to
/// bisection on the single-variable reduction, which has exactly one root in
/// `(0, a)`.
pub fn solve_confocal_caustic(a: f64, b: f64) -> Result<(f64, f64)> {
    check_axes(a, b)?;
    let residual = |x: f64, y: f64| (x / a + y / b - 1.0, (a * a - x * x) - (b * b - y * y));
    let norm = |(f1, f2): (f64, f64)| f1.abs().max(f2.abs() / (a * a));
    let in_domain = |x: f64, y: f64| 0.0 < y && y < x && x < a && y < b;

    let (mut x, mut y) = (a / 2.0, b / 2.0);
    let mut converged = false;
    for _ in 0..100 {
        let f = residual(x, y);
        if norm(f) <= 1e-16 {
            converged = true;
            break;
        }
        // J = [[1/a, 1/b], [−2x, 2y]]
        let det = 2.0 * y / a + 2.0 * x / b;
        let dx = (2.0 * y * f.0 - f.1 / b) / det;
        let dy = (f.1 / a + 2.0 * x * f.0) / det;
        let mut step = 1.0;
        let current = norm(f);
        loop {
            let (nx, ny) = (x - step * dx, y - step * dy);
            if in_domain(nx, ny) && norm(residual(nx, ny)) < current {
                x = nx;
                y = ny;
                break;
            }
            step /= 2.0;
            if step < 1e-12 {
                break;
            }
        }
        if step < 1e-12 {
            converged = norm(residual(x, y)) <= 1e-15;
            break;
        }
    }

    if !converged || !in_domain(x, y) {
        let g = |x: f64| {
            let y = b * (1.0 - x / a);
            (a * a - x * x) - (b * b - y * y)
        };
        let (mut lo, mut hi) = (0.0, a);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        x = 0.5 * (lo + hi);
        y = b * (1.0 - x / a);
    }

    let (f1, f2) = residual(x, y);
    if !in_domain(x, y) || f1.abs() > 1e-12 || f2.abs() > 1e-12 * a * a {
        return Err(GeometryError::NoRealCaustic { a, b });
    }
    Ok((x, y))
}
