//! Experiment runner for the loopspace numerics: configuration, result tables,
//! SVG charts and one runner per subcommand.

pub mod anticipative;
pub mod config;
pub mod fixtures;
pub mod forms;
pub mod ibp;
pub mod np;
pub mod report;

use config::ExperimentConfig;
use report::ResultRow;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Ibp,
    Forms,
    Np,
    Anticipative,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Ibp => "run_ibp",
            Self::Forms => "run_forms",
            Self::Np => "run_np",
            Self::Anticipative => "run_anticipative",
        }
    }
}

/// Rows and extra `(file name, contents)` outputs (charts, tables) of one subcommand.
pub struct Outcome {
    pub rows: Vec<ResultRow>,
    pub files: Vec<(String, String)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn run(sub: Subcommand, cfg: &ExperimentConfig) -> Outcome {
    let (rows, files) = match sub {
        Subcommand::Ibp => ibp::run_ibp(cfg),
        Subcommand::Forms => forms::run_forms(cfg),
        Subcommand::Np => np::run_np(cfg),
        Subcommand::Anticipative => anticipative::run_anticipative(cfg),
    };
    Outcome { rows, files }
}

/// Runs `sub` and writes `results.csv`, `timings.csv`, `summary.txt` and the extra files to `dir`.
pub fn execute(sub: Subcommand, cfg: &ExperimentConfig, dir: &Path) -> anyhow::Result<Outcome> {
    let outcome = run(sub, cfg);
    report::write_outputs(dir, &format!("{} ({})", sub.name(), cfg.experiment), &outcome.rows, &outcome.files)?;
    Ok(outcome)
}
