//! `mzsim`: wavefield simulation of a three-grating matter-wave
//! interferometer with single-photon recoil.
//!
//! Exit codes: 0 success, 1 configuration or validation failure, 2 usage
//! error.

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod config_file;
mod output;

use commands::Plane;

#[derive(Parser)]
#[command(
    name = "mzsim",
    version,
    about = "Three-grating matter-wave interferometer simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file (`key = value` lines, `#` comments)
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Override a configuration key (repeatable, highest precedence)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Quadrature nodes for averaging over the photon recoil
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    /// Grid refinement: each step halves the sample spacing
    #[arg(long, default_value_t = 1)]
    oversample: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Transverse intensity profile arriving at the second or third grating
    FieldProfile {
        #[command(flatten)]
        common: Common,
        /// Observation plane
        #[arg(long, value_enum, default_value = "g2")]
        plane: Plane,
    },
    /// Transmission versus third-grating shift, with the fitted fringe
    FringeScan {
        #[command(flatten)]
        common: Common,
    },
    /// Relative contrast versus path-separation ratio, simulated and closed form
    ContrastCurve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.1)]
        r_min: f64,
        #[arg(long, default_value_t = 1.5)]
        r_max: f64,
        #[arg(long, default_value_t = 0.1)]
        r_step: f64,
    },
    /// Run the numerical invariant suite and report pass/fail per check
    Validate {
        /// Configuration file (`key = value` lines, `#` comments)
        #[arg(long)]
        config: PathBuf,
        /// Override a configuration key (repeatable, highest precedence)
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Grid refinement: each step halves the sample spacing
        #[arg(long, default_value_t = 1)]
        oversample: u32,
    },
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::FieldProfile { common, plane } => {
            let run = config_file::load(&common.config, &common.set)?;
            commands::field_profile(&run, plane, common.oversample, &common.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FringeScan { common } => {
            let run = config_file::load(&common.config, &common.set)?;
            commands::fringe_scan(&run, common.nodes, common.oversample, &common.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ContrastCurve {
            common,
            r_min,
            r_max,
            r_step,
        } => {
            let run = config_file::load(&common.config, &common.set)?;
            commands::contrast_curve_cmd(
                &run,
                r_min,
                r_max,
                r_step,
                common.nodes,
                common.oversample,
                &common.out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            config,
            set,
            oversample,
        } => {
            let run = config_file::load(&config, &set)?;
            if commands::validate(&run, oversample)? {
                println!("all checks passed");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("validation failed");
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
