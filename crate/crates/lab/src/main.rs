use clap::{Args, Parser};
use loopspace_lab::config::{ExperimentConfig, Overrides};
use loopspace_lab::{execute, report, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[allow(clippy::enum_variant_names)]
#[command(name = "loopspace-lab", version, about = "Numerical checks for stochastic analysis on loop spaces")]
enum Cli {
    /// Integration by parts on the loop group, the base and the loop bundle; quasi-invariance.
    #[command(name = "run_ibp")]
    RunIbp(RunArgs),
    /// Canonical form, brackets, geometry oracles and closedness of the Carey–Murray form.
    #[command(name = "run_forms")]
    RunForms(RunArgs),
    /// Nualart–Pardoux constants, Hölder slope and connection independence.
    #[command(name = "run_np")]
    RunNp(RunArgs),
    /// Anticipative Stratonovich integrals: self-convergence and reductions.
    #[command(name = "run_anticipative")]
    RunAnticipative(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Key–value configuration file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides `out` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    samples: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    grid: Option<i64>,
}

fn main() -> ExitCode {
    let (sub, args) = match Cli::parse() {
        Cli::RunIbp(a) => (Subcommand::Ibp, a),
        Cli::RunForms(a) => (Subcommand::Forms, a),
        Cli::RunNp(a) => (Subcommand::Np, a),
        Cli::RunAnticipative(a) => (Subcommand::Anticipative, a),
    };
    let overrides = Overrides {
        seed: args.seed,
        out: args.out,
        samples: args.samples,
        grid: args.grid,
    };
    let cfg = match ExperimentConfig::load(&args.config, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match execute(sub, &cfg, &cfg.out) {
        Ok(outcome) => {
            print!("{}", report::summary(&format!("{} ({})", sub.name(), cfg.experiment), &outcome.rows));
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
