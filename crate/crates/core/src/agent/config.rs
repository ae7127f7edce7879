use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Learner hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    /// Mini-batch size `N_b`.
    pub batch_size: usize,
    pub gamma: f64,
    /// Learner-side floor/ceiling `±reward_clip` on stored rewards; logged
    /// returns stay unclipped. `inf` trains on raw rewards.
    pub reward_clip: f64,
    pub actor_lr: f64,
    pub reward_critic_lr: f64,
    pub cost_critic_lr: f64,
    pub dual_lr: f64,
    pub initial_lambda: f64,
    pub tau_soft: f64,
    pub ou_mu: f64,
    pub ou_theta: f64,
    pub ou_sigma: f64,
    pub buffer_capacity: usize,
    /// Wolpertinger candidate count `K`.
    pub candidates: usize,
    /// Gradient iterations per environment step once the buffer holds a batch.
    pub updates_per_step: usize,
    pub conv_filters: usize,
    pub hidden: Vec<usize>,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            batch_size: 64,
            gamma: 0.6,
            reward_clip: 10.0,
            actor_lr: 0.05,
            reward_critic_lr: 0.05,
            cost_critic_lr: 0.1,
            dual_lr: 0.01,
            initial_lambda: 0.0,
            tau_soft: 0.01,
            ou_mu: 0.0,
            ou_theta: 0.5,
            ou_sigma: 0.3,
            buffer_capacity: 100_000,
            candidates: 8,
            updates_per_step: 1,
            conv_filters: 8,
            hidden: vec![128, 128],
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("agent.actor_lr", self.actor_lr),
            ("agent.reward_critic_lr", self.reward_critic_lr),
            ("agent.cost_critic_lr", self.cost_critic_lr),
            ("agent.dual_lr", self.dual_lr),
            ("agent.initial_lambda", self.initial_lambda),
            ("agent.ou_theta", self.ou_theta),
            ("agent.ou_sigma", self.ou_sigma),
        ];
        for (path, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(path, "must be finite and nonnegative"));
            }
        }
        for (path, v) in [
            ("agent.gamma", self.gamma),
            ("agent.tau_soft", self.tau_soft),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(path, "must lie in [0, 1]"));
            }
        }
        if !(self.reward_clip > 0.0) {
            return Err(invalid(
                "agent.reward_clip",
                "must be positive (inf disables clipping)",
            ));
        }
        if !self.ou_mu.is_finite() {
            return Err(invalid("agent.ou_mu", "must be finite"));
        }
        if self.batch_size == 0 {
            return Err(invalid("agent.batch_size", "must be at least 1"));
        }
        if self.buffer_capacity < self.batch_size {
            return Err(invalid(
                "agent.buffer_capacity",
                "must hold at least one batch",
            ));
        }
        if self.candidates == 0 {
            return Err(invalid("agent.candidates", "must be at least 1"));
        }
        if self.conv_filters == 0 || self.hidden.contains(&0) {
            return Err(invalid("agent.hidden", "layer widths must be positive"));
        }
        Ok(())
    }
}
