//! Sweep tables and their CSV/JSON encodings.
//!
//! CSV reals are written with 17 significant digits so that parsing an
//! emitted file reproduces every value bit for bit.

use std::fmt::Write as _;

use poncelet_core::lab::{describe_pair, FamilySweep};
use poncelet_core::PairKind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{CliError, Result};

pub const SAMPLE_COLUMNS: [&str; 15] = [
    "t",
    "s1",
    "s2",
    "s3",
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
    "skipped",
];

pub const SUMMARY_COLUMNS: [&str; 5] = [
    "invariant",
    "mean",
    "spread",
    "relative_spread",
    "predicted",
];

pub const SUMMARY_SENTINEL: &str = "#summary";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowValues {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub circumradius: f64,
    pub rho: f64,
    pub delta_o: f64,
    pub delta_1: f64,
    pub delta_2: f64,
    pub delta_3: f64,
    pub sigma_o: f64,
    pub ratio_sum: f64,
    pub closure_residual: f64,
}

impl RowValues {
    const LEN: usize = 13;

    fn as_array(&self) -> [f64; Self::LEN] {
        [
            self.s1,
            self.s2,
            self.s3,
            self.r,
            self.circumradius,
            self.rho,
            self.delta_o,
            self.delta_1,
            self.delta_2,
            self.delta_3,
            self.sigma_o,
            self.ratio_sum,
            self.closure_residual,
        ]
    }

    fn from_array(v: [f64; Self::LEN]) -> Self {
        Self {
            s1: v[0],
            s2: v[1],
            s3: v[2],
            r: v[3],
            circumradius: v[4],
            rho: v[5],
            delta_o: v[6],
            delta_1: v[7],
            delta_2: v[8],
            delta_3: v[9],
            sigma_o: v[10],
            ratio_sum: v[11],
            closure_residual: v[12],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub t: f64,
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(flatten)]
    pub values: Option<RowValues>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub invariant: String,
    pub mean: f64,
    pub spread: f64,
    pub relative_spread: Option<f64>,
    pub predicted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub pair: String,
    pub kind: PairKind,
    pub samples: Vec<SampleRow>,
    pub summary: Vec<SummaryRow>,
}

impl SweepTable {
    /// Tabulates a sweep; `invariants` selects the summary rows.
    pub fn from_sweep(sweep: &FamilySweep, invariants: &[&str]) -> Result<Self> {
        let samples = sweep
            .samples
            .iter()
            .map(|s| match &s.outcome {
                Ok(m) => SampleRow {
                    t: s.t,
                    skipped: false,
                    reason: None,
                    values: Some(RowValues {
                        s1: m.sides[0],
                        s2: m.sides[1],
                        s3: m.sides[2],
                        r: m.inradius,
                        circumradius: m.circumradius,
                        rho: m.rho,
                        delta_o: m.center_blades.delta_x,
                        delta_1: m.center_blades.delta_1,
                        delta_2: m.center_blades.delta_2,
                        delta_3: m.center_blades.delta_3,
                        sigma_o: m.sigma_o(),
                        ratio_sum: m.ratio_sum,
                        closure_residual: m.closure_residual,
                    }),
                },
                Err(e) => SampleRow {
                    t: s.t,
                    skipped: true,
                    reason: Some(e.to_string()),
                    values: None,
                },
            })
            .collect();
        let summary = invariants
            .iter()
            .map(|name| {
                let s = sweep
                    .series(name)
                    .ok_or_else(|| CliError::InvalidSpec(format!("unknown invariant '{name}'")))?;
                Ok(SummaryRow {
                    invariant: s.name,
                    mean: s.mean,
                    spread: s.spread,
                    relative_spread: s.relative_spread,
                    predicted: s.predicted,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            pair: describe_pair(&sweep.pair),
            kind: sweep.pair.kind(),
            samples,
            summary,
        })
    }

    pub fn summary_row(&self, name: &str) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.invariant == name)
    }

    /// CSV body. Skipped rows keep `t` and leave the measured fields empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&SAMPLE_COLUMNS.join(","));
        out.push('\n');
        for row in &self.samples {
            out.push_str(&real(row.t));
            match &row.values {
                Some(v) => {
                    for x in v.as_array() {
                        out.push(',');
                        out.push_str(&real(x));
                    }
                }
                None => out.push_str(&",".repeat(RowValues::LEN)),
            }
            let _ = writeln!(out, ",{}", row.skipped);
        }
        out.push_str(SUMMARY_SENTINEL);
        out.push('\n');
        out.push_str(&SUMMARY_COLUMNS.join(","));
        out.push('\n');
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.invariant,
                real(s.mean),
                real(s.spread),
                optional(s.relative_spread),
                optional(s.predicted)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    /// Parses the output of [`SweepTable::to_csv`]. The pair description is
    /// not part of the CSV, so `pair` and `kind` are taken as arguments.
    pub fn parse_csv(
        text: &str,
        pair: String,
        kind: PairKind,
    ) -> std::result::Result<Self, ParseError> {
        let mut lines = text.split('\n').enumerate();
        let mut expect_header = |columns: &[&str]| -> std::result::Result<(), ParseError> {
            match lines.next() {
                Some((_, l)) if l == columns.join(",") => Ok(()),
                Some((i, l)) => Err(ParseError::at(i, format!("unexpected header '{l}'"))),
                None => Err(ParseError::at(0, "missing header")),
            }
        };
        expect_header(&SAMPLE_COLUMNS)?;

        let mut samples = Vec::new();
        let mut saw_sentinel = false;
        for (i, line) in lines.by_ref() {
            if line == SUMMARY_SENTINEL {
                saw_sentinel = true;
                break;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != SAMPLE_COLUMNS.len() {
                return Err(ParseError::at(
                    i,
                    format!("expected {} fields", SAMPLE_COLUMNS.len()),
                ));
            }
            let t = parse_real(fields[0], i)?;
            let skipped = match fields[14] {
                "true" => true,
                "false" => false,
                other => return Err(ParseError::at(i, format!("bad flag '{other}'"))),
            };
            let values = if skipped {
                None
            } else {
                let mut v = [0.0; RowValues::LEN];
                for (slot, field) in v.iter_mut().zip(&fields[1..14]) {
                    *slot = parse_real(field, i)?;
                }
                Some(RowValues::from_array(v))
            };
            samples.push(SampleRow {
                t,
                skipped,
                reason: None,
                values,
            });
        }
        if !saw_sentinel {
            return Err(ParseError::at(0, "missing summary block"));
        }
        match lines.next() {
            Some((_, l)) if l == SUMMARY_COLUMNS.join(",") => {}
            Some((i, l)) => return Err(ParseError::at(i, format!("unexpected header '{l}'"))),
            None => return Err(ParseError::at(0, "missing summary header")),
        }
        let mut summary = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != SUMMARY_COLUMNS.len() {
                return Err(ParseError::at(
                    i,
                    format!("expected {} fields", SUMMARY_COLUMNS.len()),
                ));
            }
            let opt = |s: &str| -> std::result::Result<Option<f64>, ParseError> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    parse_real(s, i).map(Some)
                }
            };
            summary.push(SummaryRow {
                invariant: f[0].to_string(),
                mean: parse_real(f[1], i)?,
                spread: parse_real(f[2], i)?,
                relative_spread: opt(f[3])?,
                predicted: opt(f[4])?,
            });
        }
        Ok(Self {
            pair,
            kind,
            samples,
            summary,
        })
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn at(index: usize, message: impl Into<String>) -> Self {
        Self {
            line: index + 1,
            message: message.into(),
        }
    }
}

fn parse_real(s: &str, index: usize) -> std::result::Result<f64, ParseError> {
    s.parse()
        .map_err(|_| ParseError::at(index, format!("bad number '{s}'")))
}

/// 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use poncelet_core::lab::INVARIANT_NAMES;
    use poncelet_core::ConcentricPair;

    #[test]
    fn real_format_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            43.982297150257104,
            1e-300,
            -2.5e17,
            5e-324,
            f64::MAX,
        ] {
            let back: f64 = real(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn csv_shape() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let sweep = FamilySweep::run(&pair, 6);
        let table = SweepTable::from_sweep(&sweep, &["sigma_o", "closure_residual"]).unwrap();
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 6 + 1 + 1 + 2);
        assert_eq!(lines[7], SUMMARY_SENTINEL);
        assert!(lines[1].ends_with(",false"));
        assert!(lines[9].starts_with("sigma_o,4.398229715025"));
        assert!(lines[10].ends_with(','));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let pair = ConcentricPair::confocal(1.5, 1.0).unwrap();
        let sweep = FamilySweep::run(&pair, 17);
        let table = SweepTable::from_sweep(&sweep, INVARIANT_NAMES).unwrap();
        let back = SweepTable::parse_csv(&table.to_csv(), table.pair.clone(), table.kind).unwrap();
        let strip = |t: &SweepTable| {
            let mut t = t.clone();
            t.samples.iter_mut().for_each(|s| s.reason = None);
            t
        };
        assert_eq!(strip(&back), strip(&table));
    }

    #[test]
    fn skipped_rows_leave_fields_empty() {
        let table = SweepTable {
            pair: String::new(),
            kind: PairKind::Incircle,
            samples: vec![SampleRow {
                t: 0.5,
                skipped: true,
                reason: Some("x".into()),
                values: None,
            }],
            summary: vec![],
        };
        let csv = table.to_csv();
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            format!("{},,,,,,,,,,,,,,true", real(0.5))
        );
        let back = SweepTable::parse_csv(&csv, String::new(), PairKind::Incircle).unwrap();
        assert!(back.samples[0].skipped && back.samples[0].values.is_none());
    }

    #[test]
    fn json_is_parseable() {
        let pair = ConcentricPair::homothetic(1.0, 1.0).unwrap();
        let table = SweepTable::from_sweep(&FamilySweep::run(&pair, 10), &["delta_1"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&table.to_json()).unwrap();
        assert_eq!(v["samples"].as_array().unwrap().len(), 10);
        assert_eq!(v["kind"], "homothetic");
        assert!(v["samples"][0]["delta_1"].is_f64());
    }
}
