use std::path::PathBuf;
use std::process::ExitCode;

use blowup_lab::{execute, output_dir, CliError, Command, Preset, RunConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blowup-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure preset; overrides the config's `preset`.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Output directory; overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Blow-up region branch and lifespan bound.
    Classify(Common),
    /// Integrate the ODE system and estimate the blow-up time.
    Integrate(Common),
    /// Integrate over a list of ε and fit scaling laws.
    Sweep(Common),
    /// Rasterize λ1, λ2 and Ω over a (p, q) grid.
    RegionGrid(Common),
    /// Run the special-function and test-function checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Perturb ρ by 1% as a negative control.
        #[arg(long)]
        inject_fault: bool,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let (command, common, fault) = match cli.command {
        Cmd::Classify(c) => (Command::Classify, c, false),
        Cmd::Integrate(c) => (Command::Integrate, c, false),
        Cmd::Sweep(c) => (Command::Sweep, c, false),
        Cmd::RegionGrid(c) => (Command::RegionGrid, c, false),
        Cmd::Verify {
            common,
            inject_fault,
        } => (Command::Verify, common, inject_fault),
    };
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if common.preset.is_some() {
        cfg.preset = common.preset;
    }
    if fault {
        cfg.inject_fault = Some(true);
    }
    let out = output_dir(&cfg, common.out, command);
    execute(command, &cfg, out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
