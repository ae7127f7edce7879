use serde::{Deserialize, Serialize};

use super::{AgentBundle, Transition};
use crate::env::{discounted_sum, IsacEnv};
use crate::error::Result;
use crate::math::SimRng;

pub const TRAINING_LOG_HEADER: &str =
    "episode,cum_reward,cum_cost,gamma_c,lambda,mean_reward_loss,mean_cost_loss";

/// Per-episode training summary. Cumulative values are discounted sums;
/// losses are `None` for episodes without gradient updates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub episode: usize,
    pub cum_reward: f64,
    pub cum_cost: f64,
    pub gamma_c: f64,
    pub lambda: f64,
    pub mean_reward_loss: Option<f64>,
    pub mean_cost_loss: Option<f64>,
}

impl EpisodeLog {
    /// Cost budget met: `C ≤ Γ_c`.
    pub fn satisfied(&self) -> bool {
        self.cum_cost <= self.gamma_c
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.episode,
            self.cum_reward,
            self.cum_cost,
            self.gamma_c,
            self.lambda,
            opt(self.mean_reward_loss),
            opt(self.mean_cost_loss)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingLog {
    pub episodes: Vec<EpisodeLog>,
}

impl TrainingLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRAINING_LOG_HEADER);
        out.push('\n');
        for e in &self.episodes {
            out.push_str(&e.csv_row());
            out.push('\n');
        }
        out
    }

    /// Fraction of episodes in `range` with `C > Γ_c`.
    pub fn violation_rate(&self, range: std::ops::Range<usize>) -> f64 {
        let slice = &self.episodes
            [range.start.min(self.episodes.len())..range.end.min(self.episodes.len())];
        if slice.is_empty() {
            return 0.0;
        }
        slice.iter().filter(|e| !e.satisfied()).count() as f64 / slice.len() as f64
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Runs `episodes` training episodes: exploratory Wolpertinger rollouts,
/// every transition stored, and `updates_per_step` learning iterations after
/// each step once the buffer holds a batch. Each episode forks one draw of
/// `rng`.
pub fn train(
    env: &mut IsacEnv,
    bundle: &mut AgentBundle,
    episodes: usize,
    rng: &mut SimRng,
) -> Result<TrainingLog> {
    bundle.check_compatible(env.config())?;
    let gamma = bundle.config.gamma;
    let users = env.users();
    let mut log = TrainingLog::default();
    for episode in 0..episodes {
        let mut ep_rng = rng.fork("train-episode");
        let mut state = env.reset(&mut ep_rng)?;
        let mut noise_rng = ep_rng.substream("exploration");
        let mut replay_rng = ep_rng.substream("replay");
        bundle.noise.reset();
        let (mut rewards, mut costs) = (Vec::new(), Vec::new());
        let (mut reward_losses, mut cost_losses) = (Vec::new(), Vec::new());
        while !env.done() {
            let (_, code) = bundle.select_action(&state, users, true, &mut noise_rng)?;
            let out = env.step(&code)?;
            rewards.push(out.reward);
            costs.push(out.cost);
            let clip = bundle.config.reward_clip;
            let learned_reward = out.reward.clamp(-clip, clip);
            bundle.replay.push(Transition {
                state,
                action: code.raw,
                reward: learned_reward,
                cost: out.cost,
                next_state: out.next_state.clone(),
                done: out.done,
            });
            for _ in 0..bundle.config.updates_per_step {
                if let Some((lr, lc)) = bundle.learn_step(&mut replay_rng)? {
                    reward_losses.push(lr);
                    cost_losses.push(lc);
                }
            }
            state = out.next_state;
        }
        let entry = EpisodeLog {
            episode,
            cum_reward: discounted_sum(&rewards, gamma),
            cum_cost: discounted_sum(&costs, gamma),
            gamma_c: bundle.budget.gamma_c,
            lambda: bundle.lambda(),
            mean_reward_loss: mean(&reward_losses),
            mean_cost_loss: mean(&cost_losses),
        };
        log::debug!(
            "episode {episode}: R={:.4} C={:.4} lambda={:.4}",
            entry.cum_reward,
            entry.cum_cost,
            entry.lambda
        );
        log.episodes.push(entry);
    }
    Ok(log)
}
