//! Family sweeps measuring which blade-area quantities stay constant.
//!
//! A sweep samples `n` orbits, measures every quantity on each valid
//! triangle and summarizes each quantity as an [`InvariantSeries`]
//! (mean, spread, relative spread, optional closed-form prediction).
//! Thresholds are left to the caller.

use serde::{Deserialize, Serialize};

use crate::circumellipse::{anticevian_blade_areas, circumellipse_area_closed, BladeAreas};
use crate::error::{GeometryError, Result};
use crate::exec::Execution;
use crate::family::{sweep_parameter, ConcentricPair, OrbitSample, PairKind};
use crate::triangle::Trilinear;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSeries {
    pub name: String,
    pub values: Vec<f64>,
    pub mean: f64,
    pub spread: f64,
    /// `spread / |mean|`; absent when the mean is zero or there are no values.
    pub relative_spread: Option<f64>,
    pub predicted: Option<f64>,
}

impl InvariantSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>, predicted: Option<f64>) -> Self {
        let n = values.len();
        let (mean, spread) = if n == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let mean = values.iter().sum::<f64>() / n as f64;
            let (lo, hi) = values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(*v), hi.max(*v))
                });
            (mean, hi - lo)
        };
        let relative_spread = (n > 0 && mean != 0.0).then(|| spread / mean.abs());
        Self {
            name: name.into(),
            values,
            mean,
            spread,
            relative_spread,
            predicted,
        }
    }

    /// `|mean − predicted| / |predicted|`.
    pub fn prediction_error(&self) -> Option<f64> {
        self.predicted
            .map(|p| (self.mean - p).abs() / p.abs().max(f64::MIN_POSITIVE))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index and value of the largest `|value|`.
    pub fn worst(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    }
}

/// Everything measured on one 3-periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMeasure {
    pub t: f64,
    pub sides: [f64; 3],
    pub inradius: f64,
    pub circumradius: f64,
    pub rho: f64,
    /// Blades centered on the anticevian of the common center `O`.
    pub center_blades: BladeAreas,
    /// Blades centered on the excenters.
    pub excentral_blades: BladeAreas,
    pub excircle_areas: [f64; 3],
    /// `Σ Δ_i/Ω_i` over the excentral blades.
    pub ratio_sum: f64,
    pub closure_residual: f64,
    /// Worst side tangency residual against the caustic.
    pub tangency_residual: f64,
    /// `|Δ_o − area(outer)| / area(outer)`.
    pub center_identity: f64,
}

impl SampleMeasure {
    pub fn sigma_o(&self) -> f64 {
        self.center_blades.sum()
    }

    /// `|Σ Δ_i/Ω_i − 2/ρ|`.
    pub fn ratio_identity(&self) -> f64 {
        (self.ratio_sum - 2.0 / self.rho).abs()
    }

    /// Worse of the two reciprocal-identity residuals.
    pub fn reciprocal_residual(&self) -> f64 {
        self.center_blades
            .reciprocal_residual()
            .max(self.excentral_blades.reciprocal_residual())
    }
}

/// Measures one orbit of `pair`.
pub fn measure_sample(pair: &ConcentricPair, orbit: &OrbitSample) -> Result<SampleMeasure> {
    let tri = &orbit.triangle;
    let metrics = tri.metrics();
    let center_x = tri.cartesian_to_trilinear(pair.center());
    let center_blades = anticevian_blade_areas(tri, &center_x)?;
    let excentral_blades = anticevian_blade_areas(tri, &Trilinear::INCENTER)?;
    let excircles = tri.excircles()?;
    let ratio_sum = excentral_blades
        .blades()
        .iter()
        .zip(excircles.areas.iter())
        .map(|(d, o)| d / o)
        .sum();
    let outer_area = pair.outer().area();
    let delta_o = circumellipse_area_closed(tri, &center_x)?;
    Ok(SampleMeasure {
        t: orbit.t,
        sides: tri.sidelengths().as_array(),
        inradius: metrics.inradius,
        circumradius: metrics.circumradius,
        rho: metrics.rho,
        center_blades,
        excentral_blades,
        excircle_areas: excircles.areas,
        ratio_sum,
        closure_residual: orbit.closure_residual,
        tangency_residual: pair.side_tangency(orbit).into_iter().fold(0.0, f64::max),
        center_identity: (delta_o - outer_area).abs() / outer_area,
    })
}

/// One sweep entry: parameter plus measurement or the reason it was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredSample {
    pub t: f64,
    pub outcome: Result<SampleMeasure>,
}

/// Measurements over a whole family, in parameter order.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySweep {
    pub pair: ConcentricPair,
    pub samples: Vec<MeasuredSample>,
}

/// All quantities known to [`FamilySweep::series`].
pub const INVARIANT_NAMES: &[&str] = &[
    "r",
    "R",
    "rho",
    "delta_o",
    "delta_1",
    "delta_2",
    "delta_3",
    "sigma_o",
    "ratio_sum",
    "closure_residual",
    "tangency_residual",
    "center_identity",
    "reciprocal_residual",
    "ratio_identity",
];

impl FamilySweep {
    pub fn run(pair: &ConcentricPair, n: usize) -> Self {
        Self::run_with(pair, n, Execution::default())
    }

    pub fn run_with(pair: &ConcentricPair, n: usize, exec: Execution) -> Self {
        let samples = exec.map_indexed(n, |k| {
            let t = sweep_parameter(k, n);
            let outcome = pair.orbit(t).and_then(|o| measure_sample(pair, &o));
            MeasuredSample { t, outcome }
        });
        Self {
            pair: pair.clone(),
            samples,
        }
    }

    pub fn valid(&self) -> impl Iterator<Item = &SampleMeasure> {
        self.samples.iter().filter_map(|s| s.outcome.as_ref().ok())
    }

    pub fn skipped(&self) -> impl Iterator<Item = (f64, &GeometryError)> {
        self.samples
            .iter()
            .filter_map(|s| s.outcome.as_ref().err().map(|e| (s.t, e)))
    }

    pub fn skipped_count(&self) -> usize {
        self.skipped().count()
    }

    fn collect(&self, f: impl Fn(&SampleMeasure) -> f64) -> Vec<f64> {
        self.valid().map(f).collect()
    }

    /// Series for a named quantity, with its closed-form value where one exists.
    pub fn series(&self, name: &str) -> Option<InvariantSeries> {
        let pair = &self.pair;
        let radii = pair.predicted_radii();
        let blade_prediction = self.each_blade_prediction();
        let (values, predicted) = match name {
            "r" => (self.collect(|m| m.inradius), radii.map(|r| r.0)),
            "R" => (self.collect(|m| m.circumradius), radii.map(|r| r.1)),
            "rho" => (self.collect(|m| m.rho), pair.predicted_rho()),
            "delta_o" => (
                self.collect(|m| m.center_blades.delta_x),
                Some(pair.outer().area()),
            ),
            "delta_1" => (self.collect(|m| m.center_blades.delta_1), blade_prediction),
            "delta_2" => (self.collect(|m| m.center_blades.delta_2), blade_prediction),
            "delta_3" => (self.collect(|m| m.center_blades.delta_3), blade_prediction),
            "sigma_o" => (
                self.collect(SampleMeasure::sigma_o),
                pair.predicted_sigma_o(),
            ),
            "ratio_sum" => (
                self.collect(|m| m.ratio_sum),
                pair.predicted_rho().map(|rho| 2.0 / rho),
            ),
            "closure_residual" => (self.collect(|m| m.closure_residual), None),
            "tangency_residual" => (self.collect(|m| m.tangency_residual), None),
            "center_identity" => (self.collect(|m| m.center_identity), None),
            "reciprocal_residual" => (self.collect(SampleMeasure::reciprocal_residual), None),
            "ratio_identity" => (self.collect(SampleMeasure::ratio_identity), None),
            _ => return None,
        };
        Some(InvariantSeries::new(name, values, predicted))
    }

    /// Homothetic families are affine images of concentric circles with
    /// equilateral orbits, so each blade has area `3·πab`.
    fn each_blade_prediction(&self) -> Option<f64> {
        let root = self.pair.base().unwrap_or(&self.pair);
        if root.kind() != PairKind::Homothetic {
            return None;
        }
        let det = self.pair.provenance().map_or(1.0, |m| m.det().abs());
        Some(3.0 * root.outer().area() * det)
    }

    pub fn report(&self, names: &[&str]) -> Result<SweepReport> {
        let series = names
            .iter()
            .map(|n| {
                self.series(n).ok_or_else(|| {
                    GeometryError::InvalidParameter(format!("unknown invariant '{n}'"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepReport {
            pair: describe_pair(&self.pair),
            kind: self.pair.kind(),
            sample_count: self.samples.len(),
            skipped_count: self.skipped_count(),
            series,
        })
    }
}

/// Summary of a family sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub pair: String,
    pub kind: PairKind,
    pub sample_count: usize,
    pub skipped_count: usize,
    pub series: Vec<InvariantSeries>,
}

impl SweepReport {
    pub fn get(&self, name: &str) -> Option<&InvariantSeries> {
        self.series.iter().find(|s| s.name == name)
    }
}

pub fn describe_pair(pair: &ConcentricPair) -> String {
    let o = pair.outer();
    let mut s = format!(
        "{} outer(a={}, b={}, rot={})",
        pair.kind().name(),
        o.a,
        o.b,
        o.rotation + 0.0
    );
    if let Some((ac, bc)) = pair.caustic_axes() {
        s.push_str(&format!(" caustic(a_c={ac}, b_c={bc})"));
    }
    if let Some(m) = pair.provenance() {
        s.push_str(&format!(
            " map[[{}, {}], [{}, {}]] from {}",
            m.linear[0][0],
            m.linear[0][1],
            m.linear[1][0],
            m.linear[1][1],
            pair.root_kind().name()
        ));
    }
    s
}

/// Total blade area around the center-anticevian over the family.
pub fn measure_sigma_o(pair: &ConcentricPair, n: usize) -> InvariantSeries {
    FamilySweep::run(pair, n)
        .series("sigma_o")
        .expect("known series")
}

/// `Σ Δ_i/Ω_i` with blades on the excenters, over the family.
pub fn measure_excircle_ratio_sum(pair: &ConcentricPair, n: usize) -> InvariantSeries {
    FamilySweep::run(pair, n)
        .series("ratio_sum")
        .expect("known series")
}

/// Ratio-sum series at point `λ` of the incircle→confocal diagonal path.
pub fn affine_continuum_probe(a: f64, b: f64, lambda: f64, n: usize) -> Result<InvariantSeries> {
    let pair = ConcentricPair::continuum(a, b, lambda)?;
    Ok(measure_excircle_ratio_sum(&pair, n))
}

/// Relative gap between the center-centered circumellipse and the outer ellipse.
pub fn measure_center_ellipse_identity(pair: &ConcentricPair, n: usize) -> InvariantSeries {
    FamilySweep::run(pair, n)
        .series("center_identity")
        .expect("known series")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::AffineMap;
    use std::f64::consts::PI;

    #[test]
    fn series_statistics() {
        let s = InvariantSeries::new("x", vec![1.0, 2.0, 4.0], Some(2.0));
        assert!((s.mean - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.spread, 3.0);
        assert!((s.relative_spread.unwrap() - 9.0 / 7.0).abs() < 1e-15);
        assert!((s.prediction_error().unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let z = InvariantSeries::new("z", vec![-1.0, 1.0], None);
        assert_eq!(z.relative_spread, None);
        let e = InvariantSeries::new("e", vec![], None);
        assert_eq!(e.relative_spread, None);
    }

    #[test]
    fn incircle_sigma() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let s = measure_sigma_o(&pair, 360);
        assert_eq!(s.values.len(), 360);
        assert!(s.relative_spread.unwrap() < 1e-9);
        assert!(s.prediction_error().unwrap() < 1e-9);
        assert!((s.predicted.unwrap() - 43.982_297_150_257_1).abs() < 1e-9);
    }

    #[test]
    fn homothetic_blades_constant() {
        let pair = ConcentricPair::homothetic(1.0, 1.0).unwrap();
        let sweep = FamilySweep::run(&pair, 24);
        for name in ["delta_1", "delta_2", "delta_3"] {
            let s = sweep.series(name).unwrap();
            assert!(s.relative_spread.unwrap() < 1e-9);
            assert!(s.prediction_error().unwrap() < 1e-9);
            assert!((s.mean - 3.0 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn shear_keeps_sigma() {
        let base = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let pair = ConcentricPair::affine_image(&base, &AffineMap::shear(0.5)).unwrap();
        let s = measure_sigma_o(&pair, 90);
        assert!(s.relative_spread.unwrap() < 1e-9);
        assert!((s.mean - 14.0 * PI).abs() / (14.0 * PI) < 1e-9);
    }

    #[test]
    fn ratio_sum_incircle() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let s = measure_excircle_ratio_sum(&pair, 120);
        assert!((s.mean - 25.0 / 6.0).abs() / (25.0 / 6.0) < 1e-9);
        assert!(s.relative_spread.unwrap() < 1e-9);
    }

    #[test]
    fn continuum_midpoint_varies() {
        let s = affine_continuum_probe(1.5, 1.0, 0.5, 90).unwrap();
        assert!(s.relative_spread.unwrap() > 1e-4);
        for lambda in [0.0, 1.0] {
            let s = affine_continuum_probe(1.5, 1.0, lambda, 90).unwrap();
            assert!(
                s.relative_spread.unwrap() < 1e-8,
                "λ={lambda}: {:?}",
                s.relative_spread
            );
        }
    }

    #[test]
    fn center_identity_holds() {
        let base = ConcentricPair::incircle(1.5, 1.0).unwrap();
        for pair in [
            base.clone(),
            ConcentricPair::homothetic(1.0, 1.0).unwrap(),
            ConcentricPair::affine_image(&base, &AffineMap::linear(1.0, 0.7, 0.0, 1.3).unwrap())
                .unwrap(),
        ] {
            let s = measure_center_ellipse_identity(&pair, 60);
            assert!(
                s.max_abs() < 1e-9,
                "{}: {}",
                describe_pair(&pair),
                s.max_abs()
            );
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let pair = ConcentricPair::confocal(1.5, 1.0).unwrap();
        let a = FamilySweep::run_with(&pair, 50, Execution::Sequential);
        let b = FamilySweep::run_with(&pair, 50, Execution::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn report_rejects_unknown_names() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let sweep = FamilySweep::run(&pair, 4);
        assert!(sweep.report(&["sigma_o", "nope"]).is_err());
        let r = sweep.report(INVARIANT_NAMES).unwrap();
        assert_eq!(r.series.len(), INVARIANT_NAMES.len());
        assert_eq!(r.sample_count, 4);
        assert_eq!(r.skipped_count, 0);
    }
}
