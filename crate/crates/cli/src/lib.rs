//! Command-line front end for Poncelet triangle-family experiments:
//! pair specifications, sweep export (CSV/JSON), the verification battery
//! and SVG figures.

pub mod error;
pub mod export;
pub mod spec;
pub mod svg;
pub mod verify;

use poncelet_core::lab::{FamilySweep, INVARIANT_NAMES};
use poncelet_core::Execution;

pub use error::{CliError, Result};
pub use export::SweepTable;
pub use spec::{Layers, PairSpec, RenderSpec, SpecKind};
pub use verify::VerifyReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

pub const MIN_SAMPLES: usize = 3;

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(CliError::InvalidSpec(format!(
            "--n must be at least {MIN_SAMPLES}, got {n}"
        )));
    }
    Ok(())
}

/// Sweep table for `spec`; an empty `invariants` selects every known one.
pub fn sweep_table(
    spec: &PairSpec,
    n: usize,
    invariants: &[String],
    exec: Execution,
) -> Result<SweepTable> {
    check_samples(n)?;
    let names: Vec<&str> = if invariants.is_empty() {
        INVARIANT_NAMES.to_vec()
    } else {
        invariants.iter().map(String::as_str).collect()
    };
    if let Some(bad) = names.iter().find(|n| !INVARIANT_NAMES.contains(n)) {
        return Err(CliError::InvalidSpec(format!("unknown invariant '{bad}'")));
    }
    let pair = spec.build()?;
    SweepTable::from_sweep(&FamilySweep::run_with(&pair, n, exec), &names)
}

pub fn cmd_sweep(
    spec: &PairSpec,
    n: usize,
    invariants: &[String],
    format: Format,
    exec: Execution,
) -> Result<String> {
    let table = sweep_table(spec, n, invariants, exec)?;
    Ok(match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    })
}

pub fn cmd_verify(spec: &PairSpec, n: usize, exec: Execution) -> Result<VerifyReport> {
    check_samples(n)?;
    let pair = spec.build_for_verify()?;
    Ok(verify::verify(&pair, n, exec))
}

/// One SVG document, or `frames` documents over a full revolution.
pub fn cmd_render(
    spec: &PairSpec,
    render: &RenderSpec,
    frames: Option<usize>,
) -> Result<Vec<String>> {
    render.validate()?;
    if frames == Some(0) {
        return Err(CliError::InvalidSpec("--frames must be positive".into()));
    }
    let pair = spec.build()?;
    let out = match frames {
        Some(k) => svg::render_frames(&pair, render, k),
        None => svg::render(&pair, render).map(|s| vec![s]),
    };
    out.map_err(CliError::Construction)
}
