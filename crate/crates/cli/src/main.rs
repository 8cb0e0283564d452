use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use poncelet_cli::{
    cmd_render, cmd_sweep, cmd_verify, CliError, Format, Layers, PairSpec, RenderSpec, SpecKind,
};
use poncelet_core::Execution;

/// Poncelet 3-periodic families: invariant sweeps, verification and figures.
#[derive(Debug, Parser)]
#[command(name = "poncelet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the family and export per-sample measurements plus a summary.
    Sweep {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 360)]
        n: usize,
        /// Invariants listed in the summary block (default: all).
        #[arg(long, value_delimiter = ',')]
        invariants: Vec<String>,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Run the property battery; exits 1 if any property fails.
    Verify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 360)]
        n: usize,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Draw the 3-periodic at parameter t as SVG.
    Render {
        #[command(flatten)]
        pair: PairArgs,
        /// Orbit parameter in radians.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 600)]
        height: u32,
        /// Comma-separated subset of outer,caustic,triangle,anticevian,blades,excircles,circumcircle.
        #[arg(long, default_value = "all")]
        layers: Layers,
        /// Write this many frames over one revolution into the --out directory.
        #[arg(long)]
        frames: Option<usize>,
        /// Output file, or directory with --frames (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long)]
    kind: SpecKind,
    /// Outer semi-axis along x.
    #[arg(long)]
    a: f64,
    /// Outer semi-axis along y.
    #[arg(long)]
    b: Option<f64>,
    /// Caustic semi-axis along x (axis_aligned).
    #[arg(long)]
    ac: Option<f64>,
    /// Caustic semi-axis along y; bypasses the closure condition (axis_aligned).
    #[arg(long)]
    bc: Option<f64>,
    /// Linear map m11,m12,m21,m22 applied to the pair.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    affine: Option<Vec<f64>>,
    /// Position on the incircle-to-confocal path (continuum).
    #[arg(long)]
    lambda: Option<f64>,
    /// Pair that --affine is applied to (affine_image).
    #[arg(long)]
    base: Option<SpecKind>,
}

impl PairArgs {
    fn spec(&self) -> Result<PairSpec, CliError> {
        let affine = match &self.affine {
            None => None,
            Some(v) => Some(<[f64; 4]>::try_from(v.as_slice()).map_err(|_| {
                CliError::InvalidSpec(format!("--affine needs 4 values, got {}", v.len()))
            })?),
        };
        Ok(PairSpec {
            kind: self.kind,
            a: self.a,
            b: self.b,
            a_c: self.ac,
            b_c: self.bc,
            affine,
            lambda: self.lambda,
            base: self.base,
        })
    }
}

#[derive(Debug, Args)]
struct ExecArgs {
    /// Run the sweep on one thread.
    #[arg(long)]
    sequential: bool,
}

impl ExecArgs {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            pair,
            n,
            invariants,
            format,
            out,
            exec,
        } => {
            let text = cmd_sweep(&pair.spec()?, n, &invariants, format, exec.execution())?;
            write_output(out.as_deref(), &text)
        }
        Command::Verify { pair, n, exec } => {
            let report = cmd_verify(&pair.spec()?, n, exec.execution())?;
            write_output(None, &report.render())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
        Command::Render {
            pair,
            t,
            width,
            height,
            layers,
            frames,
            out,
        } => {
            let render = RenderSpec {
                t,
                width,
                height,
                layers,
            };
            let spec = pair.spec()?;
            match frames {
                None => {
                    let docs = cmd_render(&spec, &render, None)?;
                    write_output(out.as_deref(), &docs[0])
                }
                Some(k) => {
                    let dir = out.ok_or_else(|| {
                        CliError::InvalidSpec("--frames requires --out <directory>".into())
                    })?;
                    let docs = cmd_render(&spec, &render, Some(k))?;
                    fs::create_dir_all(&dir)?;
                    for (i, doc) in docs.iter().enumerate() {
                        fs::write(dir.join(format!("frame_{i:04}.svg")), doc)?;
                    }
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerifyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("poncelet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
