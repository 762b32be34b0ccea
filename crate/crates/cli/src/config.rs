//! Run configuration: the JSON file every command reads.

use std::path::{Path, PathBuf};

use ffmwrc_core::channel::MwrcParams;
use ffmwrc_core::code::{DecoderConfig, DEFAULT_CANDIDATE_BUDGET};
use ffmwrc_core::entropy::NoisePmf;
use ffmwrc_core::field::FieldSpec;
use ffmwrc_core::regions::RateTuple;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_SAFETY_MARGIN: f64 = 0.1;

/// Noise on one link: a full pmf over `0..p`, or a single crossover
/// probability `rho` meaning `P(0) = 1 - rho` with `rho` spread evenly over
/// the nonzero symbols (a BSC in GF(2)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Crossover(f64),
    Pmf(Vec<f64>),
}

impl NoiseSpec {
    fn to_pmf(&self, field: FieldSpec, path: &str) -> Result<NoisePmf, CliError> {
        let probs = match self {
            NoiseSpec::Crossover(rho) => {
                if !(0.0..=1.0).contains(rho) {
                    return Err(CliError::Config(format!("{path}: crossover {rho} outside [0, 1]")));
                }
                let others = (field.order() - 1) as f64;
                std::iter::once(1.0 - rho)
                    .chain(std::iter::repeat_n(rho / others, field.order() as usize - 1))
                    .collect()
            }
            NoiseSpec::Pmf(p) => p.clone(),
        };
        NoisePmf::new(field, probs).map_err(|e| CliError::Config(format!("{path}: {e}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub num_users: usize,
    pub field_order: u32,
    pub uplink_noise: NoiseSpec,
    /// One entry per user.
    pub downlink_noise: Vec<NoiseSpec>,
    /// Exact rates such as `"3/10"`, one per user.
    pub rates: Vec<String>,
    pub n_base: usize,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_margin")]
    pub safety_margin: f64,
    #[serde(default = "default_budget")]
    pub candidate_budget: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_margin() -> f64 {
    DEFAULT_SAFETY_MARGIN
}

fn default_budget() -> u64 {
    DEFAULT_CANDIDATE_BUDGET
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: RunConfig,
    pub params: MwrcParams,
    pub rates: RateTuple,
}

impl Scenario {
    pub fn decoder(&self) -> DecoderConfig {
        DecoderConfig::with_budget(self.config.candidate_budget)
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<Scenario, CliError> {
        let cfg = |msg: String| CliError::Config(msg);
        if self.num_users < 2 {
            return Err(cfg(format!("num_users: need at least 2 users, got {}", self.num_users)));
        }
        let field = FieldSpec::new(self.field_order).map_err(|e| cfg(format!("field_order: {e}")))?;
        if self.downlink_noise.len() != self.num_users {
            return Err(cfg(format!(
                "downlink_noise: expected {} entries, got {}",
                self.num_users,
                self.downlink_noise.len()
            )));
        }
        let uplink = self.uplink_noise.to_pmf(field, "uplink_noise")?;
        let downlink = self
            .downlink_noise
            .iter()
            .enumerate()
            .map(|(i, n)| n.to_pmf(field, &format!("downlink_noise[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let params = MwrcParams::new(self.num_users, field, uplink, downlink).map_err(|e| cfg(e.to_string()))?;

        if self.rates.len() != self.num_users {
            return Err(cfg(format!(
                "rates: expected {} entries, got {}",
                self.num_users,
                self.rates.len()
            )));
        }
        let rates = RateTuple::parse(&self.rates).map_err(|e| cfg(format!("rates: {e}")))?;
        if self.n_base == 0 {
            return Err(cfg("n_base: must be positive".into()));
        }
        if self.trials == 0 {
            return Err(cfg("trials: must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.safety_margin) {
            return Err(cfg(format!("safety_margin: {} outside [0, 1)", self.safety_margin)));
        }
        if self.candidate_budget == 0 {
            return Err(cfg("candidate_budget: must be positive".into()));
        }
        Ok(Scenario {
            config: self.clone(),
            params,
            rates,
        })
    }
}
