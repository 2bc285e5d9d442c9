use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ftl_cli::{cmd_counterexample, cmd_region_slice, cmd_selftest, cmd_typemap, CliError, Outcome, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "ftl", version, about = "Boundary invariants, approach regions and the oscillation counterexample")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config file; flags override its fields
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Domain preset: sphere, paper-quartic, egg-m2, egg-m3
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Number of product stages
    #[arg(long, global = true, value_name = "K")]
    stages: Option<usize>,
    /// Depth of the commutator table
    #[arg(long, global = true, value_name = "N")]
    kmax: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Type and Lambda_k over the patch grid
    Typemap,
    /// Region membership over a 2-D interior slice
    RegionSlice,
    /// Packing, zeros, product and oscillation experiment
    Counterexample,
    /// Quick checks against known invariant values
    Selftest,
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let overrides = Overrides {
        preset: cli.preset.clone(),
        seed: cli.seed,
        out: cli.out.clone(),
        stages: cli.stages,
        k_max: cli.kmax,
    };
    let cfg = RunConfig::resolve(cli.config.as_deref(), &overrides)?;
    match cli.command {
        Command::Typemap => cmd_typemap(&cfg),
        Command::RegionSlice => cmd_region_slice(&cfg),
        Command::Counterexample => cmd_counterexample(&cfg),
        Command::Selftest => cmd_selftest(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for l in &outcome.lines {
                println!("{l}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if !outcome.pass {
                eprintln!("experiment failure: failing suites: {}", outcome.failing.join(", "));
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("ftl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
