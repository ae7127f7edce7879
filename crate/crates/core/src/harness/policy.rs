use serde::{Deserialize, Serialize};

use crate::agent::AgentBundle;
use crate::baselines::{exhaustive_policy, greedy_policy, random_policy, PolicyKind};
use crate::env::{discounted_sum, IsacEnv, TraceRow};
use crate::error::Result;
use crate::math::SimRng;

/// A runnable policy. Baselines are stateless apart from the per-episode
/// random stream; the agent acts greedily (no exploration noise).
#[derive(Clone, Debug)]
pub enum Policy {
    Random,
    Greedy,
    Exhaustive { budget: u128 },
    Agent(Box<AgentBundle>),
}

impl Policy {
    pub fn kind(&self) -> PolicyKind {
        match self {
            Self::Random => PolicyKind::Random,
            Self::Greedy => PolicyKind::Greedy,
            Self::Exhaustive { .. } => PolicyKind::Exhaustive,
            Self::Agent(_) => PolicyKind::Agent,
        }
    }

    fn lambda(&self) -> f64 {
        match self {
            Self::Agent(b) => b.lambda(),
            _ => 0.0,
        }
    }
}

/// Outcome of one evaluation episode. Cumulative values are discounted with
/// the agent's γ; means are plain averages over subframes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub episode: usize,
    pub cum_reward: f64,
    pub cum_cost: f64,
    pub gamma_c: f64,
    pub satisfied: bool,
    pub mean_se: f64,
    pub mean_crlb: f64,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

/// Resets `env` from `episode_rng` and plays one full frame.
pub fn run_episode(
    env: &mut IsacEnv,
    policy: &mut Policy,
    episode: usize,
    gamma: f64,
    episode_rng: &mut SimRng,
) -> Result<EpisodeSummary> {
    let mut state = env.reset(episode_rng)?;
    let mut policy_rng = episode_rng.substream("random-policy");
    let cfg = env.config().clone();
    let users = env.users();
    let budget = crate::env::episode_budget(&cfg, gamma);
    let (mut rewards, mut costs, mut ses, mut crlbs, mut trace) =
        (vec![], vec![], vec![], vec![], vec![]);
    while !env.done() {
        let t = env.t();
        let out = match policy {
            Policy::Random => env.step(&random_policy(users, &cfg, &mut policy_rng))?,
            Policy::Greedy => {
                let action = greedy_policy(&env.snapshot()?, users, &cfg)?;
                env.step(&action)?
            }
            Policy::Exhaustive { budget } => {
                let precoder = exhaustive_policy(&env.snapshot()?, users, &cfg, *budget)?;
                env.step_with_precoder(precoder)?
            }
            Policy::Agent(bundle) => {
                let (_, action) = bundle.select_action(&state, users, false, &mut policy_rng)?;
                env.step(&action)?
            }
        };
        rewards.push(out.reward);
        costs.push(out.cost);
        ses.push(out.info.se);
        crlbs.push(out.info.crlb);
        trace.push(TraceRow::from_outcome(t, &out, policy.lambda()));
        state = out.next_state;
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    let cum_cost = discounted_sum(&costs, gamma);
    Ok(EpisodeSummary {
        episode,
        cum_reward: discounted_sum(&rewards, gamma),
        cum_cost,
        gamma_c: budget.gamma_c,
        satisfied: cum_cost <= budget.gamma_c,
        mean_se: mean(&ses),
        mean_crlb: mean(&crlbs),
        trace,
    })
}

/// Plays `episodes` frames whose seeds come from successive forks of
/// `stream`; equal streams give every policy the same frames.
pub fn run_episodes(
    env: &mut IsacEnv,
    policy: &mut Policy,
    episodes: usize,
    gamma: f64,
    mut stream: SimRng,
    fork_label: &str,
) -> Result<Vec<EpisodeSummary>> {
    (0..episodes)
        .map(|i| {
            let mut ep = stream.fork(fork_label);
            run_episode(env, policy, i, gamma, &mut ep)
        })
        .collect()
}
