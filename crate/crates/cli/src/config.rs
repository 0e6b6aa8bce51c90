use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use coreset_core::harness::{PoolSpec, Strategy, SweepMode};
use coreset_core::synthetic::SyntheticSpec;
use coreset_core::Power;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::ingest::Format;

#[derive(Debug, Parser)]
#[command(name = "coreset", version, about = "Build and check k-means / k-median coresets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Build,
    Eval,
    Sweep,
    Netlab,
    SubspaceCheck,
    Gen,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a coreset and write it with its meta file.
    Build(Args),
    /// Measure a coreset against a candidate pool.
    Eval(Args),
    /// Distortion against coreset size.
    Sweep(Args),
    /// Build a clustering net on a tiny instance and measure its coverage.
    Netlab(Args),
    /// Check the greedy inner-product subspace on random targets.
    SubspaceCheck(Args),
    /// Write a synthetic data set.
    Gen(Args),
}

impl Command {
    pub fn split(self) -> (CommandKind, Args) {
        match self {
            Command::Build(a) => (CommandKind::Build, a),
            Command::Eval(a) => (CommandKind::Eval, a),
            Command::Sweep(a) => (CommandKind::Sweep, a),
            Command::Netlab(a) => (CommandKind::Netlab, a),
            Command::SubspaceCheck(a) => (CommandKind::SubspaceCheck, a),
            Command::Gen(a) => (CommandKind::Gen, a),
        }
    }
}

/// Flags shared by all subcommands; each uses the ones it needs.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Args {
    /// TOML file with the same keys as the flags (snake_case); flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub z: Option<u8>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Total number of draws, split evenly over groups.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub m_per_group: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// `COUNT` or `COUNT:strategy,strategy,...`.
    #[arg(long)]
    pub pool: Option<String>,
    /// Input format: auto, csv or csv+weight.
    #[arg(long)]
    pub format: Option<String>,
    /// Directory written by `build`.
    #[arg(long)]
    pub coreset: Option<PathBuf>,
    /// Evaluate the full instance as its own coreset.
    #[arg(long)]
    pub passthrough: bool,
    /// Synthetic data spec as JSON, e.g. `{"kind":"uniform_cube","dim":2,"n":100}`.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub jl_constant: Option<f64>,
    #[arg(long)]
    pub oversample: Option<f64>,
    #[arg(long)]
    pub i: Option<i32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub slack: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub subset: Option<usize>,
}

/// Merged configuration; unknown keys in a config file are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub k: Option<usize>,
    pub z: Option<u8>,
    pub eps: Option<f64>,
    pub budget: Option<usize>,
    pub m_per_group: Option<usize>,
    pub seed: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    pub sizes: Option<Vec<usize>>,
    pub pool: Option<String>,
    pub format: Option<String>,
    pub coreset: Option<PathBuf>,
    #[serde(default)]
    pub passthrough: bool,
    pub spec: Option<SyntheticSpec>,
    pub mode: Option<String>,
    pub gamma: Option<f64>,
    pub jl_constant: Option<f64>,
    pub oversample: Option<f64>,
    pub netlab: Option<NetlabConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetlabConfig {
    pub i: Option<i32>,
    pub alpha: Option<f64>,
    pub slack: Option<f64>,
    pub trials: Option<usize>,
    pub radius: Option<f64>,
    pub subset: Option<usize>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::validation(format!("config {}: {e}", path.display())))
    }

    pub fn from_args(args: &Args) -> CliResult<Self> {
        let mut cfg = match &args.config {
            Some(p) => Self::from_file(p)?,
            None => RunConfig::default(),
        };
        overlay!(cfg, args, input, output, k, z, eps, budget, m_per_group, seed, seeds, sizes, pool, format,
            coreset, mode, gamma, jl_constant, oversample);
        cfg.passthrough |= args.passthrough;
        if let Some(spec) = &args.spec {
            cfg.spec = Some(
                serde_json::from_str(spec)
                    .map_err(|e| CliError::validation(format!("--spec: {e}")))?,
            );
        }
        let mut net = cfg.netlab.take().unwrap_or_default();
        overlay!(net, args, i, alpha, slack, trials, radius, subset);
        cfg.netlab = Some(net);
        Ok(cfg)
    }

    pub fn input(&self) -> CliResult<&Path> {
        self.input.as_deref().ok_or_else(|| CliError::validation("--input is required"))
    }

    pub fn output(&self) -> CliResult<&Path> {
        self.output.as_deref().ok_or_else(|| CliError::validation("--output is required"))
    }

    pub fn k(&self) -> CliResult<usize> {
        match self.k {
            Some(0) => Err(CliError::validation("k must be at least 1")),
            Some(k) => Ok(k),
            None => Err(CliError::validation("--k is required")),
        }
    }

    pub fn power(&self) -> CliResult<Power> {
        Power::from_z(self.z.unwrap_or(2)).map_err(|e| CliError::validation(e.to_string()))
    }

    pub fn eps(&self) -> CliResult<f64> {
        let eps = self.eps.unwrap_or(0.25);
        if eps > 0.0 && eps <= 0.5 {
            Ok(eps)
        } else {
            Err(CliError::validation(format!("eps must lie in (0, 1/2], got {eps}")))
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format(&self) -> CliResult<Format> {
        Format::parse(self.format.as_deref().unwrap_or("auto"))
    }

    pub fn pool(&self, default_count: usize) -> CliResult<PoolSpec> {
        parse_pool(self.pool.as_deref(), default_count, self.seed())
    }

    pub fn mode(&self) -> CliResult<SweepMode> {
        match self.mode.as_deref().unwrap_or("sampled") {
            "sampled" => Ok(SweepMode::Sampled),
            "fixed" | "fixed_coreset" => Ok(SweepMode::FixedCoreset),
            m => Err(CliError::validation(format!("unknown sweep mode {m:?}"))),
        }
    }
}

pub fn parse_pool(spec: Option<&str>, default_count: usize, seed: u64) -> CliResult<PoolSpec> {
    let Some(spec) = spec else {
        return Ok(PoolSpec::mixed(default_count, seed));
    };
    let (count, strategies) = match spec.split_once(':') {
        Some((c, s)) => (c, Some(s)),
        None => (spec, None),
    };
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| CliError::validation(format!("pool: bad count {count:?}")))?;
    if count == 0 {
        return Err(CliError::validation("pool: count must be at least 1"));
    }
    let strategies = match strategies {
        None => Strategy::ALL.to_vec(),
        Some(list) => list
            .split(',')
            .map(|s| {
                Strategy::parse(s.trim())
                    .ok_or_else(|| CliError::validation(format!("pool: unknown strategy {s:?}")))
            })
            .collect::<CliResult<_>>()?,
    };
    Ok(PoolSpec { count, strategies, seed })
}
