use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use fwdis_core::StartMode;
use serde::{Deserialize, Serialize};

pub const DEFAULT_CAP: usize = 1_000_000;
pub const DEFAULT_RESOLUTION: f64 = 0.05;
pub const DEFAULT_VERIFY_ITERATIONS: usize = 100;

/// Everything needed to reproduce a `solve` or `verify` run.
///
/// Written with `--write-config` and read back with `--config`; flags given on
/// the command line override values from the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `cut2`, `random-quadratic:N`, a set-function table file, or a quadratic `.json`.
    pub objective: String,
    #[serde(default = "default_region")]
    pub region: String,
    #[serde(default)]
    pub iterations: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub start: StartMode,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    #[serde(default)]
    pub skip_lyapunov: bool,
}

fn default_region() -> String {
    "box".into()
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

fn default_resolution() -> f64 {
    DEFAULT_RESOLUTION
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Origin,
    Mininf,
}

impl From<StartArg> for StartMode {
    fn from(s: StartArg) -> Self {
        match s {
            StartArg::Origin => StartMode::Origin,
            StartArg::Mininf => StartMode::MinInfNorm,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Read settings from a JSON config; explicit flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the effective config as JSON before running.
    #[arg(long, value_name = "FILE")]
    pub write_config: Option<PathBuf>,
    /// `cut2`, `random-quadratic:N`, a set-function table file, or a quadratic `.json`.
    #[arg(long)]
    pub objective: Option<String>,
    /// `box`, `covering`, `cardinality:K`, `knapsack:W1,..,Wn:B`, `halfspaces:FILE`, or a region `.json`.
    #[arg(long)]
    pub region: Option<String>,
    /// Number of iterations T.
    #[arg(long, conflicts_with = "epsilon")]
    pub iters: Option<usize>,
    /// Choose the smallest T whose certificate error term is at most this.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Upper limit on T in epsilon mode.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub start: Option<StartArg>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Grid step for the brute-force reference optimum (0.1, 0.05 or 0.02).
    #[arg(long)]
    pub resolution: Option<f64>,
    #[arg(long)]
    pub skip_lyapunov: bool,
}

impl RunArgs {
    /// Merges the config file (if any) with explicit flags.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => RunConfig {
                objective: String::new(),
                region: default_region(),
                iterations: None,
                epsilon: None,
                cap: DEFAULT_CAP,
                seed: 0,
                start: StartMode::Origin,
                out: None,
                resolution: DEFAULT_RESOLUTION,
                skip_lyapunov: false,
            },
        };
        if let Some(o) = &self.objective {
            cfg.objective = o.clone();
        }
        if let Some(r) = &self.region {
            cfg.region = r.clone();
        }
        if let Some(t) = self.iters {
            cfg.iterations = Some(t);
            cfg.epsilon = None;
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = Some(e);
            cfg.iterations = None;
        }
        if let Some(c) = self.cap {
            cfg.cap = c;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = self.start {
            cfg.start = s.into();
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(r) = self.resolution {
            cfg.resolution = r;
        }
        cfg.skip_lyapunov |= self.skip_lyapunov;
        if cfg.objective.is_empty() {
            bail!("no objective given (use --objective or a config file)");
        }
        if cfg.iterations == Some(0) {
            bail!("--iters must be at least 1");
        }
        if cfg.iterations.is_some() && cfg.epsilon.is_some() {
            bail!("give either an iteration count or an epsilon, not both");
        }
        if let Some(path) = &self.write_config {
            crate::output::write_atomic(path, serde_json::to_string_pretty(&cfg)?.as_bytes())?;
        }
        Ok(cfg)
    }
}
