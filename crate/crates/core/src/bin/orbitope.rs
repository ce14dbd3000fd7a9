use clap::{Parser, Subcommand};
use orbitope::scenario::{run_scenario, Overrides, PRESETS};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "orbitope", version, about = "Gradient-map toolkit for compatible linear group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file and write report.json plus CSV traces.
    Run {
        /// Path to a scenario JSON file.
        scenario: PathBuf,
        /// Output directory (overrides the scenario's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Sample-count override.
        #[arg(long)]
        samples: Option<usize>,
        /// Tolerance override, repeatable: --tol cluster=1e-8
        #[arg(long = "tol", value_name = "KEY=VAL")]
        tol: Vec<String>,
        /// Run the full invariant suite regardless of the scenario's task list.
        #[arg(long)]
        verify: bool,
    },
    /// List the built-in scenario presets.
    Presets,
}

fn parse_tol(raw: &[String]) -> Result<Vec<(String, f64)>, String> {
    raw.iter()
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("expected KEY=VAL, got '{}'", item))?;
            let val: f64 = v.parse().map_err(|_| format!("'{}' is not a number in '{}'", v, item))?;
            Ok((k.to_string(), val))
        })
        .collect()
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { scenario, out, seed, samples, tol, verify } => {
            let tolerances = match parse_tol(&tol) {
                Ok(t) => t,
                Err(msg) => {
                    eprintln!("error: {}", msg);
                    std::process::exit(1);
                }
            };
            run_scenario(&scenario, &Overrides { out, seed, samples, tolerances, verify })
        }
        Command::Presets => {
            for (name, blurb) in PRESETS {
                println!("{:<10} {}", name, blurb);
            }
            0
        }
    };
    std::process::exit(code);
}
