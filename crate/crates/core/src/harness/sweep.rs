use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SweepAxis};
use super::policy::run_episodes;
use super::run::{evaluation_stream, init_stream, make_policy, training_stream, EVAL_FORK};
use crate::agent::{train, AgentBundle};
use crate::baselines::PolicyKind;
use crate::channel::ScenarioConfig;
use crate::env::IsacEnv;
use crate::error::{IsacError, Result};

/// One evaluation episode's metric at one sweep point: averaged CRLB for the
/// SNR axis, averaged SE for the users axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub value: f64,
    pub policy: PolicyKind,
    pub seed: u64,
    pub episode: usize,
    pub metric: f64,
}

/// Raw sweep samples; table cells are means recomputed from them.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub policies: Vec<PolicyKind>,
    pub samples: Vec<SweepSample>,
}

pub fn axis_column(axis: SweepAxis) -> &'static str {
    match axis {
        SweepAxis::Snr => "snr_db",
        SweepAxis::Users => "users",
    }
}

impl SweepTable {
    /// Mean metric of `policy` at `value`; `None` without samples.
    pub fn cell(&self, value: f64, policy: PolicyKind) -> Option<f64> {
        let v: Vec<f64> = self
            .samples
            .iter()
            .filter(|s| s.value == value && s.policy == policy)
            .map(|s| s.metric)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// Wide table: one row per value, one column per listed policy.
    pub fn to_csv(&self, policies: &[PolicyKind]) -> String {
        let mut out = String::from(axis_column(self.axis));
        for p in policies {
            out.push(',');
            out.push_str(p.name());
        }
        out.push('\n');
        for &v in &self.values {
            out.push_str(&v.to_string());
            for &p in policies {
                out.push(',');
                if let Some(m) = self.cell(v, p) {
                    out.push_str(&m.to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_raw(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for s in &self.samples {
            w.serialize(s)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rebuilds a table from a raw sample file; values and policies keep
    /// first-appearance order.
    pub fn read_raw(axis: SweepAxis, path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let samples: Vec<SweepSample> = r.deserialize().collect::<std::result::Result<_, _>>()?;
        let mut values: Vec<f64> = Vec::new();
        let mut policies: Vec<PolicyKind> = Vec::new();
        for s in &samples {
            if !values.contains(&s.value) {
                values.push(s.value);
            }
            if !policies.contains(&s.policy) {
                policies.push(s.policy);
            }
        }
        Ok(Self {
            axis,
            values,
            policies,
            samples,
        })
    }
}

/// Scenario at one sweep point.
pub fn sweep_scenario(base: &ScenarioConfig, axis: SweepAxis, value: f64) -> ScenarioConfig {
    let mut s = base.clone();
    match axis {
        SweepAxis::Snr => s.set_snr_db(value),
        SweepAxis::Users => s.users = value as usize,
    }
    s
}

fn sweep_point(
    config: &ExperimentConfig,
    axis: SweepAxis,
    value: f64,
    seed: u64,
) -> Result<Vec<SweepSample>> {
    let scenario = sweep_scenario(&config.scenario, axis, value);
    scenario.validate()?;
    let mut env = IsacEnv::new(&scenario)?;
    let wants_agent = config.campaign.policies.contains(&PolicyKind::Agent);
    let agent = if wants_agent && config.campaign.agent_checkpoint.is_none() {
        let mut bundle = AgentBundle::new(&scenario, config.agent.clone(), &mut init_stream(seed))?;
        train(
            &mut env,
            &mut bundle,
            config.campaign.episodes,
            &mut training_stream(seed),
        )?;
        Some(bundle)
    } else {
        None
    };
    let mut samples = Vec::new();
    for &kind in &config.campaign.policies {
        let mut policy = make_policy(kind, config, &scenario, agent.as_ref())?;
        let episodes = match run_episodes(
            &mut env,
            &mut policy,
            config.campaign.eval_episodes,
            config.agent.gamma,
            evaluation_stream(seed),
            EVAL_FORK,
        ) {
            Ok(e) => e,
            Err(IsacError::SearchBudgetExceeded { size, budget }) => {
                log::warn!(
                    "{kind} skipped at {} = {value}: {size} precoders exceed budget {budget}",
                    axis.name()
                );
                continue;
            }
            Err(e) => return Err(e),
        };
        samples.extend(episodes.into_iter().map(|e| SweepSample {
            value,
            policy: kind,
            seed,
            episode: e.episode,
            metric: match axis {
                SweepAxis::Snr => e.mean_crlb,
                SweepAxis::Users => e.mean_se,
            },
        }));
    }
    Ok(samples)
}

/// Evaluates the configured policies at every `(value, seed)` pair. Points
/// run in parallel; samples are merged in `(value, seed)` order, so the
/// result does not depend on scheduling.
pub fn run_sweep(config: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepTable> {
    let mut probe = config.clone();
    probe.campaign.sweep.axis = axis;
    probe.campaign.sweep.values = values.to_vec();
    probe.validate()?;
    let jobs: Vec<(f64, u64)> = values
        .iter()
        .flat_map(|&v| config.campaign.seeds.iter().map(move |&s| (v, s)))
        .collect();
    let parts: Vec<Vec<SweepSample>> = jobs
        .par_iter()
        .map(|&(v, s)| sweep_point(config, axis, v, s))
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        axis,
        values: values.to_vec(),
        policies: config.campaign.policies.clone(),
        samples: parts.into_iter().flatten().collect(),
    })
}
