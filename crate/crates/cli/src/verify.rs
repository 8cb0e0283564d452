//! Property battery run by `poncelet verify`.

use std::fmt::Write as _;

use poncelet_core::circumellipse::{anticevian_blade_areas, circumconic_fit_area, sigma_sum};
use poncelet_core::family::{sweep_parameter, TANGENCY_TOLERANCE};
use poncelet_core::lab::{describe_pair, FamilySweep};
use poncelet_core::{
    ConcentricPair, Eq2Verdict, Execution, PairKind, Result as GeoResult, Trilinear,
};

pub const RECIPROCAL_TOLERANCE: f64 = 1e-11;
pub const ORACLE_TOLERANCE: f64 = 1e-8;
pub const ORACLE_SAMPLES: usize = 32;
pub const CENTER_IDENTITY_TOLERANCE: f64 = 1e-9;
pub const RATIO_IDENTITY_TOLERANCE: f64 = 1e-10;
pub const SIGMA_SPREAD_TOLERANCE: f64 = 1e-9;
pub const SIGMA_PREDICTION_TOLERANCE: f64 = 1e-8;
pub const RADII_TOLERANCE: f64 = 1e-10;
pub const RHO_SPREAD_TOLERANCE: f64 = 1e-9;
pub const RATIO_SPREAD_TOLERANCE: f64 = 1e-8;
pub const BLADE_SPREAD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub pair: String,
    pub samples: usize,
    pub checks: Vec<Check>,
    /// Verdict shared by every sample, if they agree.
    pub verdict: Option<Eq2Verdict>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "pair: {}", self.pair);
        let _ = writeln!(out, "samples: {}", self.samples);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {:<22} {}", c.name, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(
            out,
            "result: {}",
            if self.passed() {
                "all properties hold"
            } else {
                "property failure"
            }
        );
        out
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

struct Battery {
    checks: Vec<Check>,
}

impl Battery {
    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }

    /// Pass iff every value is below `tol`; on failure names the worst sample.
    fn bound(&mut self, name: &'static str, ts: &[f64], values: &[f64], tol: f64) {
        if values.is_empty() {
            self.push(name, false, "no valid samples".into());
            return;
        }
        let (i, worst) = values
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        if worst < tol {
            self.push(name, true, format!("max={} tol={}", sci(worst), sci(tol)));
        } else {
            self.push(
                name,
                false,
                format!("t={} residual={} tol={}", ts[i], sci(worst), sci(tol)),
            );
        }
    }

    /// Relative spread of a named series below `tol`, plus an optional
    /// prediction check.
    fn constant(
        &mut self,
        name: &'static str,
        sweep: &FamilySweep,
        series: &str,
        tol: f64,
        prediction_tol: Option<f64>,
    ) {
        let Some(s) = sweep.series(series) else {
            self.push(name, false, format!("unknown series {series}"));
            return;
        };
        let Some(spread) = s.relative_spread else {
            self.push(name, false, "no valid samples".into());
            return;
        };
        let mut passed = spread < tol;
        let mut detail = format!(
            "mean={:.12} rel_spread={} tol={}",
            s.mean,
            sci(spread),
            sci(tol)
        );
        if let (Some(ptol), Some(p), Some(err)) =
            (prediction_tol, s.predicted, s.prediction_error())
        {
            passed &= err < ptol;
            let _ = write!(detail, " predicted={p:.12} rel_err={}", sci(err));
        }
        if !passed {
            let (lo, hi) = extremes(&s.values);
            let ts = valid_ts(sweep);
            let _ = write!(detail, " min_at_t={} max_at_t={}", ts[lo], ts[hi]);
        }
        self.push(name, passed, detail);
    }
}

fn extremes(v: &[f64]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[lo] {
            lo = i;
        }
        if *x > v[hi] {
            hi = i;
        }
    }
    (lo, hi)
}

fn valid_ts(sweep: &FamilySweep) -> Vec<f64> {
    sweep.valid().map(|m| m.t).collect()
}

/// Worst relative gap between the closed-form areas and the numeric fit on
/// one orbit, over the center and excentral blades.
fn oracle_gap(pair: &ConcentricPair, t: f64) -> GeoResult<f64> {
    let tri = pair.orbit(t)?.triangle;
    let x = tri.cartesian_to_trilinear(pair.center());
    let mut worst: f64 = 0.0;
    for x in [x, Trilinear::INCENTER] {
        let areas = anticevian_blade_areas(&tri, &x)?;
        let mut centers = vec![(tri.trilinear_to_cartesian(&x)?, areas.delta_x)];
        let anti = tri.anticevian_vertices(&x)?;
        centers.extend(anti.into_iter().zip(areas.blades()));
        for (c, closed) in centers {
            let fit = circumconic_fit_area(&tri, c)?;
            worst = worst.max((fit - closed).abs() / closed.abs());
        }
    }
    Ok(worst)
}

/// Runs every property that applies to `pair` over `n` samples.
pub fn verify(pair: &ConcentricPair, n: usize, exec: Execution) -> VerifyReport {
    let mut b = Battery { checks: Vec::new() };
    let mut notes = Vec::new();

    let closure: Vec<(f64, GeoResult<f64>)> = exec.map_indexed(n, |k| {
        let t = sweep_parameter(k, n);
        (t, pair.closure_residual(t))
    });
    let tol = pair.closure_tolerance();
    let failure = closure.iter().find_map(|(t, r)| match r {
        Ok(r) if *r < tol => None,
        Ok(r) => Some(format!("t={t} residual={} tol={}", sci(*r), sci(tol))),
        Err(e) => Some(format!("t={t} {e}")),
    });
    match failure {
        Some(detail) => b.push("closure", false, detail),
        None => {
            let worst = closure
                .iter()
                .filter_map(|(_, r)| r.as_ref().ok().copied())
                .fold(0.0, f64::max);
            b.push(
                "closure",
                true,
                format!("max={} tol={}", sci(worst), sci(tol)),
            );
        }
    }

    let sweep = FamilySweep::run_with(pair, n, exec);
    let skipped = sweep.skipped_count();
    if skipped > 0 {
        if let Some((t, e)) = sweep.skipped().next() {
            notes.push(format!(
                "{skipped} of {n} samples skipped; first at t={t}: {e}"
            ));
        }
    }
    let ts = valid_ts(&sweep);
    let valid: Vec<_> = sweep.valid().collect();
    let col = |f: &dyn Fn(&poncelet_core::lab::SampleMeasure) -> f64| -> Vec<f64> {
        valid.iter().map(|m| f(m)).collect()
    };

    b.bound(
        "tangency",
        &ts,
        &col(&|m| m.tangency_residual),
        TANGENCY_TOLERANCE,
    );
    b.bound(
        "reciprocal_identity",
        &ts,
        &col(&|m| m.reciprocal_residual()),
        RECIPROCAL_TOLERANCE,
    );

    let picks: Vec<f64> = if ts.is_empty() {
        Vec::new()
    } else {
        let m = ORACLE_SAMPLES.min(ts.len());
        (0..m).map(|k| ts[k * ts.len() / m]).collect()
    };
    let gaps: Vec<GeoResult<f64>> = exec.map_indexed(picks.len(), |k| oracle_gap(pair, picks[k]));
    match gaps
        .iter()
        .zip(&picks)
        .find_map(|(g, t)| g.as_ref().err().map(|e| (t, e)))
    {
        Some((t, e)) => b.push("oracle_equivalence", false, format!("t={t} {e}")),
        None => {
            let values: Vec<f64> = gaps.into_iter().map(|g| g.expect("checked")).collect();
            b.bound("oracle_equivalence", &picks, &values, ORACLE_TOLERANCE);
        }
    }

    b.bound(
        "center_identity",
        &ts,
        &col(&|m| m.center_identity),
        CENTER_IDENTITY_TOLERANCE,
    );
    b.bound(
        "ratio_identity",
        &ts,
        &col(&|m| m.ratio_identity()),
        RATIO_IDENTITY_TOLERANCE,
    );
    b.constant(
        "sigma_o_invariance",
        &sweep,
        "sigma_o",
        SIGMA_SPREAD_TOLERANCE,
        Some(SIGMA_PREDICTION_TOLERANCE),
    );

    let kind = pair.kind();
    if kind == PairKind::Incircle {
        b.constant(
            "inradius_constant",
            &sweep,
            "r",
            RADII_TOLERANCE,
            Some(RADII_TOLERANCE),
        );
        b.constant(
            "circumradius_constant",
            &sweep,
            "R",
            RADII_TOLERANCE,
            Some(RADII_TOLERANCE),
        );
    }
    if matches!(kind, PairKind::Incircle | PairKind::Confocal) {
        b.constant(
            "rho_constant",
            &sweep,
            "rho",
            RHO_SPREAD_TOLERANCE,
            Some(RHO_SPREAD_TOLERANCE),
        );
        b.constant(
            "ratio_sum_invariance",
            &sweep,
            "ratio_sum",
            RATIO_SPREAD_TOLERANCE,
            Some(RATIO_SPREAD_TOLERANCE),
        );
    } else if let Some(s) = sweep.series("ratio_sum").and_then(|s| s.relative_spread) {
        notes.push(format!(
            "ratio_sum rel_spread={} (not expected constant)",
            sci(s)
        ));
    }
    if pair.root_kind() == PairKind::Homothetic {
        for (name, series) in [
            ("delta_1_constant", "delta_1"),
            ("delta_2_constant", "delta_2"),
            ("delta_3_constant", "delta_3"),
        ] {
            b.constant(
                name,
                &sweep,
                series,
                BLADE_SPREAD_TOLERANCE,
                Some(BLADE_SPREAD_TOLERANCE),
            );
        }
    }

    let verdicts: Vec<GeoResult<Eq2Verdict>> = valid
        .iter()
        .map(|m| {
            let tri = pair.orbit(m.t)?.triangle;
            let x = tri.cartesian_to_trilinear(pair.center());
            Ok(sigma_sum(&tri, &x)?.verdict)
        })
        .collect();
    let first = verdicts.first().and_then(|v| v.as_ref().ok().copied());
    let shared = first.filter(|f| verdicts.iter().all(|v| v.as_ref().ok() == Some(f)));
    let verdict = shared.filter(|v| matches!(v, Eq2Verdict::Printed | Eq2Verdict::Alternative));
    match (verdict, shared) {
        (Some(v), _) => b.push(
            "sum_formula_verdict",
            true,
            format!("{v:?}: {}", v.describe()),
        ),
        (None, Some(v)) => b.push(
            "sum_formula_verdict",
            false,
            format!("{v:?}: {}", v.describe()),
        ),
        (None, None) => {
            let detail = verdicts
                .iter()
                .zip(&ts)
                .find_map(|(v, t)| match v {
                    Ok(v) if Some(*v) != first => Some(format!("t={t} verdict {v:?} differs")),
                    Err(e) => Some(format!("t={t} {e}")),
                    _ => None,
                })
                .unwrap_or_else(|| "no valid samples".into());
            b.push("sum_formula_verdict", false, detail);
        }
    }

    VerifyReport {
        pair: describe_pair(pair),
        samples: n,
        checks: b.checks,
        verdict,
        notes,
    }
}
