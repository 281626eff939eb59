// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lindblad_lab_cli::output::Format;
use lindblad_lab_cli::{load_scenario, presets, resolve_out_dir, runner, verify, CliError};

#[derive(Parser)]
#[command(
    name = "lindblad-lab",
    about = "Scenario runner for damped open quantum systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (a JSON config path or a preset name) and write its
    /// artifacts.
    Run {
        config: String,
        /// Output directory (LINDBLAD_LAB_OUT overrides this flag).
        #[arg(long)]
        out: Option<String>,
        /// Reject models violating the fundamental constraints.
        #[arg(long)]
        strict: bool,
        /// Artifact format.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Run a verification scenario (analytic path vs oracle path).
    Verify {
        config: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// List built-in presets, or print one as JSON.
    Presets {
        /// Preset name to print.
        name: Option<String>,
    },
}

fn run() -> Result<(), CliError> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            strict,
            format,
        } => {
            let scenario = load_scenario(&config)?;
            let format: Format = format.parse()?;
            let dir = resolve_out_dir(out.as_deref());
            let written = runner::run(&scenario, &dir, strict, format)?;
            for path in written {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Verify { config, out } => {
            let scenario = load_scenario(&config)?;
            let dir = resolve_out_dir(out.as_deref());
            let (report, path) = verify::verify(&scenario, &dir)?;
            for c in &report.checks {
                println!(
                    "{}: {} (max deviation {:.3e}, tolerance {:.3e})",
                    c.name,
                    if c.pass { "pass" } else { "FAIL" },
                    c.max_deviation,
                    c.tolerance
                );
            }
            println!("{}", path.display());
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Numerics(lindblad_lab::Error::Inconsistent(
                    "verification checks failed".into(),
                )))
            }
        }
        Command::Presets { name } => {
            match name {
                Some(n) => {
                    let preset = presets::by_name(&n).ok_or_else(|| {
                        CliError::Schema(format!("unknown preset `{n}`"))
                    })?;
                    println!("{}", preset.to_json());
                }
                None => {
                    for p in presets::all() {
                        println!("{}", p.name);
                    }
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
