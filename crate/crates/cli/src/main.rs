use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use nilflow_cli::commands::{cmd_closure, cmd_predict, cmd_scenarios, cmd_verify};
use nilflow_cli::load_scenario;

#[derive(Parser)]
#[command(name = "nilflow", version, about = "Hausdorff limits of polynomial families in tori and nilmanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact normal form, limit family and classification.
    Predict {
        /// Scenario file or bundled scenario name.
        scenario: String,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sample the family on its schedule and check the prediction.
    Verify {
        scenario: String,
        /// Directory for the CSV/JSON/SVG reports.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
        /// Replace the lattice by N times itself.
        #[arg(long, value_name = "N")]
        lattice_scale: Option<u64>,
    },
    /// Rational closure of a subspace with respect to a lattice.
    Closure {
        /// JSON list of spanning vectors, e.g. '[[1, [0, 1]]]' for (1, θ).
        #[arg(long)]
        subspace: String,
        /// JSON list of basis vectors, or "integer" (default).
        #[arg(long)]
        lattice: Option<String>,
        /// "Q", "sqrt:N", or a JSON field declaration.
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// List the bundled scenarios.
    Scenarios,
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("NILFLOW_THREADS") {
        let n: usize = v.parse().with_context(|| format!("NILFLOW_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    init_threads()?;
    match cli.command {
        Command::Predict { scenario, json } => {
            print!("{}", cmd_predict(&load_scenario(&scenario)?, json)?);
            Ok(0)
        }
        Command::Verify { scenario, out, svg, lattice_scale } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(n) = lattice_scale {
                s = s.with_lattice_scale(n)?;
            }
            let outcome = cmd_verify(&s, out.as_deref(), svg)?;
            print!("{}", outcome.text);
            Ok(outcome.exit_code as u8)
        }
        Command::Closure { subspace, lattice, field } => {
            print!("{}", cmd_closure(&subspace, lattice.as_deref(), &field)?);
            Ok(0)
        }
        Command::Scenarios => {
            print!("{}", cmd_scenarios());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
