//! Experiment configuration: a flat TOML table with a fixed set of keys.

use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
#[error("{path}{}: {message}", line.map(|l| format!(":{l}")).unwrap_or_default())]
pub struct ConfigError {
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BundleKind {
    Flat,
    MaurerCartan,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionKind {
    Linear,
    Reparametrized,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<String>,
    bundle: Option<BundleKind>,
    lambda: Option<f64>,
    connection: Option<ConnectionKind>,
    grid: Option<i64>,
    samples: Option<i64>,
    seed: Option<u64>,
    threshold: Option<f64>,
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub bundle: BundleKind,
    pub lambda: f64,
    pub connection: ConnectionKind,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: "default".into(),
            bundle: BundleKind::MaurerCartan,
            lambda: 0.5,
            connection: ConnectionKind::Linear,
            grid: 256,
            samples: 100_000,
            seed: 1,
            threshold: 3.0,
            out: PathBuf::from("out"),
        }
    }
}

/// Command-line overrides applied after parsing, before validation.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub samples: Option<i64>,
    pub grid: Option<i64>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

impl ExperimentConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.display().to_string(),
            line: None,
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string(), overrides)
    }

    pub fn parse(text: &str, origin: &str, overrides: &Overrides) -> Result<Self, ConfigError> {
        let err = |line: Option<usize>, message: String| ConfigError {
            path: origin.to_string(),
            line,
            message,
        };
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start));
            err(line, e.message().to_string())
        })?;
        let d = Self::default();
        let positive_int = |key: &str, v: Option<i64>, over: Option<i64>, default: usize| {
            match over.or(v) {
                None => Ok(default),
                Some(n) if n > 0 => Ok(n as usize),
                Some(n) => Err(err(
                    if over.is_some() { None } else { key_line(text, key) },
                    format!("`{key}` must be a positive integer, got {n}"),
                )),
            }
        };
        let grid = positive_int("grid", raw.grid, overrides.grid, d.grid)?;
        if grid < 2 {
            return Err(err(key_line(text, "grid"), "`grid` must be at least 2".into()));
        }
        let samples = positive_int("samples", raw.samples, overrides.samples, d.samples)?;
        let positive = |key: &str, v: Option<f64>, default: f64| match v {
            None => Ok(default),
            Some(x) if x > 0.0 && x.is_finite() => Ok(x),
            Some(x) => Err(err(key_line(text, key), format!("`{key}` must be positive, got {x}"))),
        };
        let seed = overrides.seed.or(raw.seed).unwrap_or(d.seed);
        if seed == 0 && overrides.seed.is_none() && raw.seed.is_some() {
            return Err(err(key_line(text, "seed"), "`seed` must be positive".into()));
        }
        Ok(Self {
            experiment: raw.experiment.unwrap_or(d.experiment),
            bundle: raw.bundle.unwrap_or(d.bundle),
            lambda: positive("lambda", raw.lambda, d.lambda)?,
            connection: raw.connection.unwrap_or(d.connection),
            grid,
            samples,
            seed,
            threshold: positive("threshold", raw.threshold, d.threshold)?,
            out: overrides.out.clone().or(raw.out).unwrap_or(d.out),
        })
    }

    pub fn bundle_spec(&self) -> loopspace_core::bundle::BundleSpec<4> {
        use loopspace_core::bundle::BundleSpec;
        match self.bundle {
            BundleKind::Flat => BundleSpec::flat(),
            BundleKind::MaurerCartan => BundleSpec::maurer_cartan(self.lambda),
        }
    }

    pub fn infinity_connection(&self) -> loopspace_core::bundle::InfinityConnection {
        use loopspace_core::bundle::InfinityConnection;
        match self.connection {
            ConnectionKind::Linear => InfinityConnection::Linear,
            ConnectionKind::Reparametrized => InfinityConnection::Reparametrized,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::parse(s, "test.toml", &Overrides::default())
    }

    #[test]
    fn defaults_and_values() {
        let c = parse("experiment = \"x\"\ngrid = 64\nbundle = \"flat\"\n").unwrap();
        assert_eq!(c.grid, 64);
        assert_eq!(c.bundle, BundleKind::Flat);
        assert_eq!(c.samples, 100_000);
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = parse("grid = 64\n\nsamplez = 3\n").unwrap_err();
        assert_eq!(e.line, Some(3), "{e}");
        assert!(e.message.contains("samplez"), "{e}");
    }

    #[test]
    fn zero_samples_rejected() {
        let e = parse("experiment = \"x\"\nsamples = 0\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = ExperimentConfig::parse(
            "",
            "t",
            &Overrides {
                samples: Some(0),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(e.message.contains("samples"));
    }

    #[test]
    fn syntax_error_has_line() {
        let e = parse("grid = 64\nseed = = 3\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn overrides_win() {
        let c = ExperimentConfig::parse(
            "seed = 5\ngrid = 64\n",
            "t",
            &Overrides {
                seed: Some(9),
                grid: Some(32),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((c.seed, c.grid), (9, 32));
    }
}
