use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agent::AgentConfig;
use crate::baselines::{PolicyKind, EXHAUSTIVE_BUDGET};
use crate::channel::ScenarioConfig;
use crate::error::{invalid, IsacError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    /// `P_t / σ_c²` in dB; the sweep reports averaged CRLB.
    Snr,
    /// Number of served users; the sweep reports averaged SE.
    Users,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Snr => "snr",
            Self::Users => "users",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = IsacError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(Self::Snr),
            "users" => Ok(Self::Users),
            other => Err(IsacError::Parse(format!(
                "unknown sweep axis `{other}` (expected snr or users)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            axis: SweepAxis::Snr,
            values: vec![0.0, 10.0, 20.0, 30.0],
        }
    }
}

/// What to run: training length, evaluation length, seeds, policies and
/// where to write results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub episodes: usize,
    pub eval_episodes: usize,
    pub seeds: Vec<u64>,
    pub policies: Vec<PolicyKind>,
    pub sweep: SweepConfig,
    pub output_dir: PathBuf,
    /// Per-subframe trace CSVs for evaluation episodes.
    pub save_traces: bool,
    pub exhaustive_budget: u64,
    /// Trained agent used by `eval`/`sweep` instead of training afresh.
    pub agent_checkpoint: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            episodes: 300,
            eval_episodes: 20,
            seeds: vec![1, 2, 3, 4, 5],
            policies: vec![PolicyKind::Agent, PolicyKind::Random, PolicyKind::Greedy],
            sweep: SweepConfig::default(),
            output_dir: PathBuf::from("runs/default"),
            save_traces: false,
            exhaustive_budget: EXHAUSTIVE_BUDGET as u64,
            agent_checkpoint: None,
        }
    }
}

/// Complete, serialisable description of an experiment. A run directory
/// stores the exact instance it was produced from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub agent: AgentConfig,
    pub campaign: CampaignConfig,
}

impl ExperimentConfig {
    /// Desk-scale profile: tiny scenario, 300 training episodes, seeds 1..=5,
    /// all four policies.
    pub fn tiny() -> Self {
        Self {
            scenario: ScenarioConfig::tiny(),
            agent: AgentConfig::default(),
            campaign: CampaignConfig {
                policies: PolicyKind::ALL.to_vec(),
                eval_episodes: 100,
                output_dir: PathBuf::from("runs/tiny"),
                ..CampaignConfig::default()
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.agent.validate()?;
        let c = &self.campaign;
        if c.seeds.is_empty() {
            return Err(invalid("campaign.seeds", "at least one seed is required"));
        }
        if c.policies.is_empty() {
            return Err(invalid(
                "campaign.policies",
                "at least one policy is required",
            ));
        }
        if c.sweep.values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("campaign.sweep.values", "values must be finite"));
        }
        if c.sweep.axis == SweepAxis::Users
            && c.sweep
                .values
                .iter()
                .any(|&v| v < 1.0 || v.fract() != 0.0 || v as usize > self.scenario.max_users)
        {
            return Err(invalid(
                "campaign.sweep.values",
                format!(
                    "user counts must be integers in 1..={}",
                    self.scenario.max_users
                ),
            ));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| IsacError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| IsacError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }
}
