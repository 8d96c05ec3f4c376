//! Command-line laboratory around [`blowup_core`]: region classification,
//! ODE blow-up runs, ε-sweeps, region rasters and verification checks.

// `!(x > y)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

use std::path::PathBuf;

pub use config::{Preset, RunConfig};
pub use error::CliError;

use output::OutputDir;
use verify::VerifyOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Integrate,
    Sweep,
    RegionGrid,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Integrate => "integrate",
            Command::Sweep => "sweep",
            Command::RegionGrid => "region-grid",
            Command::Verify => "verify",
        }
    }
}

/// Output directory: explicit, from the config, or `blowup-lab-out/<command>`.
pub fn output_dir(cfg: &RunConfig, explicit: Option<PathBuf>, command: Command) -> PathBuf {
    explicit
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("blowup-lab-out").join(command.name()))
}

/// Runs one command, writing its artifacts under `out`, and returns the
/// text printed on success.
pub fn execute(command: Command, cfg: &RunConfig, out: PathBuf) -> Result<String, CliError> {
    let mut dir = OutputDir::create(&out)?;
    let text = match command {
        Command::Classify => commands::classify(cfg, &mut dir)?.summary(),
        Command::Integrate => commands::integrate_run(cfg, &mut dir)?.summary(),
        Command::Sweep => {
            let report = commands::sweep(cfg, &mut dir)?;
            let mut s = String::new();
            for r in &report.rows {
                s += &format!(
                    "eps={} termination={} t_b={}\n",
                    r.eps,
                    r.termination,
                    r.t_b.map_or_else(|| "-".into(), |t| t.to_string())
                );
            }
            s + &std::fs::read_to_string(dir.path().join("fit.txt")).unwrap_or_default()
        }
        Command::RegionGrid => {
            let cells = commands::region_grid(cfg, &mut dir)?;
            format!(
                "{} cells written to {}",
                cells.len(),
                dir.path().join("region_grid.csv").display()
            )
        }
        Command::Verify => {
            let opts = VerifyOptions {
                inject_fault: cfg.inject_fault.unwrap_or(false),
            };
            let results = verify::verify(cfg, &opts, &mut dir)?;
            let text = verify::render(&results);
            let failed = results.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                eprint!("{text}");
                return Err(CliError::Verification {
                    failed,
                    total: results.len(),
                });
            }
            text
        }
    };
    Ok(text.trim_end().to_string())
}
