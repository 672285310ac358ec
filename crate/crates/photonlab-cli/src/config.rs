//! Run configuration: a key = value text file, overridden by flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use photonlab::estimation::{default_phi_star, ExperimentConfig};
use photonlab::fock::InputKind;
use serde::Serialize;

/// Loss sweep direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LossMode {
    /// `t0 = t1 = t` over the grid.
    Symmetric,
    /// `t0 = 1`, `t1` over the grid.
    Asymmetric,
}

impl std::str::FromStr for LossMode {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Self::Symmetric),
            "asymmetric" => Ok(Self::Asymmetric),
            other => bail!("loss mode must be symmetric or asymmetric, not {other:?}"),
        }
    }
}

/// Fully resolved run settings, echoed into the manifest.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub states: Vec<String>,
    pub t0: f64,
    pub t1: f64,
    /// Operating phases per state; `None` entries fall back to the built-in
    /// defaults.
    pub phi_star: Option<f64>,
    pub n_r: usize,
    pub experiments: usize,
    pub shots: u64,
    pub grid: usize,
    pub posterior_points: usize,
    pub exact: bool,
    pub seed: u64,
    pub t_grid: Vec<f64>,
    pub loss_mode: LossMode,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            states: vec!["noon6".into(), "mm51".into(), "mm42".into(), "hb6".into()],
            t0: 1.0,
            t1: 1.0,
            phi_star: None,
            n_r: 400,
            experiments: 200,
            shots: 100_000,
            grid: 360,
            posterior_points: 2000,
            exact: true,
            seed: 0,
            t_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            loss_mode: LossMode::Symmetric,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Reads `key = value` lines; `#` starts a comment. Every key matches one
    /// command-line flag.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').with_context(|| {
                format!("{}:{}: expected key = value", path.display(), lineno + 1)
            })?;
            cfg.set(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "state" | "states" => {
                self.states = value.split(',').map(|s| s.trim().to_string()).collect()
            }
            "t0" => self.t0 = value.parse()?,
            "t1" => self.t1 = value.parse()?,
            "phi_star" => self.phi_star = Some(value.parse()?),
            "nr" | "n_r" => self.n_r = value.parse()?,
            "experiments" => self.experiments = value.parse()?,
            "shots" => self.shots = value.parse()?,
            "grid" => self.grid = value.parse()?,
            "posterior_points" => self.posterior_points = value.parse()?,
            "exact" => self.exact = value.parse()?,
            "seed" => self.seed = value.parse()?,
            "t_grid" => {
                self.t_grid = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()?
            }
            "loss_mode" => self.loss_mode = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }

    pub fn parse_states(&self) -> Result<Vec<InputKind>> {
        self.states
            .iter()
            .map(|s| {
                s.parse::<InputKind>()
                    .map_err(|e| anyhow::anyhow!("state {s:?}: {e}"))
            })
            .collect()
    }

    /// Operating phase for `kind`: the explicit override, or the built-in
    /// per-state default.
    pub fn phi_star_for(&self, kind: &InputKind) -> Result<f64> {
        if let Some(phi) = self.phi_star {
            return Ok(phi);
        }
        default_phi_star(kind).ok_or_else(|| {
            anyhow::anyhow!(
                "no built-in phi* for state {}; pass --phi-star",
                kind.label()
            )
        })
    }

    /// Estimation campaign settings for one state and loss cell.
    pub fn experiment(&self, kind: &InputKind, t0: f64, t1: f64) -> Result<ExperimentConfig> {
        let phi_star = self.phi_star_for(kind)?;
        let mut cfg = ExperimentConfig::new(kind.clone(), t0, t1, phi_star, self.seed);
        cfg.n_r = self.n_r;
        cfg.experiments = self.experiments;
        cfg.table_grid = self.grid;
        cfg.table_shots = self.shots;
        cfg.exact_table = self.exact;
        cfg.posterior_points = self.posterior_points;
        Ok(cfg)
    }
}
