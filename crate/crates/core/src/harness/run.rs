use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::policy::{run_episodes, EpisodeSummary, Policy};
use super::stats::{summarize, Stats};
use super::sweep::SweepTable;
use crate::agent::{train, AgentBundle, TrainingLog};
use crate::baselines::PolicyKind;
use crate::channel::ScenarioConfig;
use crate::env::{IsacEnv, TRACE_CSV_HEADER};
use crate::error::{invalid, Result};
use crate::math::SimRng;

/// Stream that seeds the agent's initial parameters.
pub fn init_stream(seed: u64) -> SimRng {
    SimRng::derive(seed, "agent-init")
}

/// Stream forked once per training episode (label `"train-episode"`).
pub fn training_stream(seed: u64) -> SimRng {
    SimRng::derive(seed, "train")
}

/// Stream forked once per evaluation episode (label `"eval-episode"`);
/// every policy sees the same frames.
pub fn evaluation_stream(seed: u64) -> SimRng {
    SimRng::derive(seed, "evaluation")
}

pub const TRAIN_FORK: &str = "train-episode";
pub const EVAL_FORK: &str = "eval-episode";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyEvaluation {
    pub policy: PolicyKind,
    pub episodes: Vec<EpisodeSummary>,
}

impl PolicyEvaluation {
    pub fn reward_stats(&self) -> Stats {
        summarize(
            &self
                .episodes
                .iter()
                .map(|e| e.cum_reward)
                .collect::<Vec<_>>(),
        )
    }

    /// Fraction of episodes with `C ≤ Γ_c`.
    pub fn satisfaction_rate(&self) -> f64 {
        let n = self.episodes.len().max(1) as f64;
        self.episodes.iter().filter(|e| e.satisfied).count() as f64 / n
    }
}

/// Raw results of one seed (training log, evaluation episodes) and any
/// sweeps; every summary is recomputed from these.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunRecord {
    pub seed: Option<u64>,
    pub training: TrainingLog,
    pub evaluation: Vec<PolicyEvaluation>,
    pub sweeps: Vec<SweepTable>,
}

/// Builds a runnable policy for `scenario`. The agent comes from `agent`,
/// else from `campaign.agent_checkpoint`.
pub fn make_policy(
    kind: PolicyKind,
    config: &ExperimentConfig,
    scenario: &ScenarioConfig,
    agent: Option<&AgentBundle>,
) -> Result<Policy> {
    Ok(match kind {
        PolicyKind::Random => Policy::Random,
        PolicyKind::Greedy => Policy::Greedy,
        PolicyKind::Exhaustive => Policy::Exhaustive {
            budget: u128::from(config.campaign.exhaustive_budget),
        },
        PolicyKind::Agent => match (agent, &config.campaign.agent_checkpoint) {
            (Some(b), _) => Policy::Agent(Box::new(b.clone())),
            (None, Some(dir)) => Policy::Agent(Box::new(AgentBundle::load(dir, scenario)?)),
            (None, None) => {
                return Err(invalid(
                    "campaign.agent_checkpoint",
                    "the agent policy needs a trained agent or a checkpoint directory",
                ))
            }
        },
    })
}

/// Evaluates every configured policy on the seed's evaluation frames.
pub fn evaluate_policies(
    config: &ExperimentConfig,
    seed: u64,
    agent: Option<&AgentBundle>,
) -> Result<Vec<PolicyEvaluation>> {
    let mut env = IsacEnv::new(&config.scenario)?;
    config
        .campaign
        .policies
        .iter()
        .map(|&kind| {
            let mut policy = make_policy(kind, config, &config.scenario, agent)?;
            let episodes = run_episodes(
                &mut env,
                &mut policy,
                config.campaign.eval_episodes,
                config.agent.gamma,
                evaluation_stream(seed),
                EVAL_FORK,
            )?;
            Ok(PolicyEvaluation {
                policy: kind,
                episodes,
            })
        })
        .collect()
}

/// Trains a fresh agent for `config.campaign.episodes` episodes, then
/// evaluates all configured policies without exploration.
pub fn run_training(config: &ExperimentConfig, seed: u64) -> Result<(RunRecord, AgentBundle)> {
    config.validate()?;
    let mut env = IsacEnv::new(&config.scenario)?;
    let mut bundle = AgentBundle::new(
        &config.scenario,
        config.agent.clone(),
        &mut init_stream(seed),
    )?;
    let training = train(
        &mut env,
        &mut bundle,
        config.campaign.episodes,
        &mut training_stream(seed),
    )?;
    let evaluation = evaluate_policies(config, seed, Some(&bundle))?;
    let record = RunRecord {
        seed: Some(seed),
        training,
        evaluation,
        sweeps: Vec::new(),
    };
    Ok((record, bundle))
}

/// [`run_training`] for every configured seed (in parallel), in seed order.
pub fn run_campaign(config: &ExperimentConfig) -> Result<Vec<(RunRecord, AgentBundle)>> {
    config.validate()?;
    config
        .campaign
        .seeds
        .par_iter()
        .map(|&s| run_training(config, s))
        .collect()
}

#[derive(Serialize)]
struct EvaluationRow<'a> {
    policy: &'a str,
    episode: usize,
    cum_reward: f64,
    cum_cost: f64,
    gamma_c: f64,
    satisfied: bool,
    mean_se: f64,
    mean_crlb: f64,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    policy: &'a str,
    metric: &'a str,
    n: usize,
    mean: f64,
    median: f64,
    q1: f64,
    q3: f64,
}

pub fn write_evaluation(evaluation: &[PolicyEvaluation], dir: &Path, traces: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("evaluation.csv"))?;
    for pe in evaluation {
        for e in &pe.episodes {
            w.serialize(EvaluationRow {
                policy: pe.policy.name(),
                episode: e.episode,
                cum_reward: e.cum_reward,
                cum_cost: e.cum_cost,
                gamma_c: e.gamma_c,
                satisfied: e.satisfied,
                mean_se: e.mean_se,
                mean_crlb: e.mean_crlb,
            })?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    for pe in evaluation {
        let column = |f: fn(&EpisodeSummary) -> f64| pe.episodes.iter().map(f).collect::<Vec<_>>();
        let metrics: [(&str, Vec<f64>); 5] = [
            ("cum_reward", column(|e| e.cum_reward)),
            ("cum_cost", column(|e| e.cum_cost)),
            ("satisfied", column(|e| f64::from(u8::from(e.satisfied)))),
            ("mean_se", column(|e| e.mean_se)),
            ("mean_crlb", column(|e| e.mean_crlb)),
        ];
        for (metric, values) in &metrics {
            let s = summarize(values);
            w.serialize(SummaryRow {
                policy: pe.policy.name(),
                metric,
                n: s.n,
                mean: s.mean,
                median: s.median,
                q1: s.q1,
                q3: s.q3,
            })?;
        }
    }
    w.flush()?;

    if traces {
        let tdir = dir.join("traces");
        std::fs::create_dir_all(&tdir)?;
        for pe in evaluation {
            let mut text = format!("episode,{TRACE_CSV_HEADER}\n");
            for e in &pe.episodes {
                for row in &e.trace {
                    text.push_str(&format!("{},{}\n", e.episode, row.csv_row()));
                }
            }
            std::fs::write(tdir.join(format!("{}.csv", pe.policy.name())), text)?;
        }
    }
    Ok(())
}

/// Writes one seed's outputs: training log, evaluation tables, optional
/// traces and the agent checkpoints.
pub fn write_run(
    config: &ExperimentConfig,
    record: &RunRecord,
    agent: Option<&AgentBundle>,
    dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("training_log.csv"), record.training.to_csv())?;
    write_evaluation(&record.evaluation, dir, config.campaign.save_traces)?;
    if let Some(bundle) = agent {
        bundle.save(&dir.join("checkpoints"))?;
    }
    Ok(())
}

pub fn read_training_log(path: &Path) -> Result<TrainingLog> {
    let mut r = csv::Reader::from_path(path)?;
    let episodes = r
        .deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(TrainingLog { episodes })
}

pub fn seed_dir(root: &Path, seed: u64) -> std::path::PathBuf {
    root.join(format!("seed-{seed}"))
}
