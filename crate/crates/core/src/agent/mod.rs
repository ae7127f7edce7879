//! Primal-dual DDPG with Wolpertinger action selection.
//!
//! The actor proposes a point in `[0, 1]^{N_A}`; exploration adds OU noise;
//! the `K` nearest feasible binary codes are scored by the Lagrangian
//! `Q_R − λ(Q_C − Γ_c)` and the best one is executed. Critics regress onto
//! one-step targets from the target networks, the actor ascends
//! `Q_R − λ Q_C`, and λ follows projected ascent on the predicted
//! constraint violation.

mod config;
mod dual;
mod knn;
mod noise;
mod replay;
mod train;

use std::path::Path;

use ndarray::{Array2, Array4};
use serde::{Deserialize, Serialize};

pub use config::AgentConfig;
pub use dual::DualVariable;
pub use knn::knn_binary;
pub use noise::OuNoise;
pub use replay::{ReplayBuffer, Transition};
pub use train::{train, EpisodeLog, TrainingLog, TRAINING_LOG_HEADER};

use crate::channel::ScenarioConfig;
use crate::env::{episode_budget, ActionCode, EnvState, EpisodeBudget};
use crate::error::{dim_mismatch, IsacError, Result};
use crate::math::SimRng;
use crate::neural::{
    adam_step, load_checkpoint, mean_output, mse_loss, save_checkpoint, soft_update, AdamConfig,
    AdamState, NetInput, NetSpec, Network,
};

/// Stacks observations (and optionally actions) into a network batch.
pub fn batch_input(states: &[&EnvState], actions: Option<&[&[f64]]>) -> Result<NetInput> {
    let first = states.first().ok_or(IsacError::EmptyInput("batch_input"))?;
    let (d, u, g) = first.channel.dim();
    let (x, y) = first.spectra[0].dim();
    let b = states.len();
    let mut channel = Array4::zeros((b, d, u, g));
    let mut position = Array4::zeros((b, first.spectra.len(), x, y));
    for (i, s) in states.iter().enumerate() {
        if s.channel.dim() != (d, u, g) || s.spectra[0].dim() != (x, y) {
            return Err(dim_mismatch(
                "batch_input",
                ((d, u, g), (x, y)),
                (s.channel.dim(), s.spectra[0].dim()),
            ));
        }
        channel
            .slice_mut(ndarray::s![i, .., .., ..])
            .assign(&*s.channel);
        for (k, spectrum) in s.spectra.iter().enumerate() {
            position
                .slice_mut(ndarray::s![i, k, .., ..])
                .assign(&spectrum.mapv(f64::from));
        }
    }
    let action = match actions {
        None => None,
        Some(a) => {
            if a.len() != b {
                return Err(dim_mismatch("batch_input actions", b, a.len()));
            }
            let n = a.first().map_or(0, |v| v.len());
            let flat: Vec<f64> = a.iter().flat_map(|v| v.iter().copied()).collect();
            Some(
                Array2::from_shape_vec((b, n), flat)
                    .map_err(|_| dim_mismatch("batch_input actions", n, "ragged"))?,
            )
        }
    };
    Ok(NetInput {
        channel,
        position,
        action,
    })
}

/// Persisted learner scalars next to the network checkpoints.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct AgentMeta {
    lambda: f64,
    config: AgentConfig,
}

/// Everything the learner owns: online and target networks, optimiser
/// states, exploration noise, the dual variable and the replay buffer.
#[derive(Clone, Debug)]
pub struct AgentBundle {
    pub config: AgentConfig,
    pub scenario: ScenarioConfig,
    pub budget: EpisodeBudget,
    pub actor: Network,
    pub actor_target: Network,
    pub reward_critic: Network,
    pub reward_target: Network,
    pub cost_critic: Network,
    pub cost_target: Network,
    pub actor_opt: AdamState,
    pub reward_opt: AdamState,
    pub cost_opt: AdamState,
    pub noise: OuNoise,
    pub dual: DualVariable,
    pub replay: ReplayBuffer,
}

fn sized(spec: NetSpec, config: &AgentConfig) -> NetSpec {
    NetSpec {
        conv_filters: config.conv_filters,
        hidden: config.hidden.clone(),
        ..spec
    }
}

impl AgentBundle {
    /// Default architecture with fresh parameters drawn from `rng`.
    pub fn new(scenario: &ScenarioConfig, config: AgentConfig, rng: &mut SimRng) -> Result<Self> {
        config.validate()?;
        let actor = Network::new(
            sized(NetSpec::actor(scenario), &config),
            &mut rng.substream("actor"),
        )?;
        let reward = Network::new(
            sized(NetSpec::critic(scenario), &config),
            &mut rng.substream("reward-critic"),
        )?;
        let cost = Network::new(
            sized(NetSpec::critic(scenario), &config),
            &mut rng.substream("cost-critic"),
        )?;
        Self::with_networks(scenario, config, actor, reward, cost)
    }

    /// Wraps given online networks; targets start as exact copies.
    pub fn with_networks(
        scenario: &ScenarioConfig,
        config: AgentConfig,
        actor: Network,
        reward_critic: Network,
        cost_critic: Network,
    ) -> Result<Self> {
        config.validate()?;
        scenario.validate()?;
        let n_a = scenario.action_bits();
        if actor.spec().outputs != n_a || actor.spec().action_inputs != 0 {
            return Err(dim_mismatch(
                "AgentBundle actor outputs",
                n_a,
                actor.spec().outputs,
            ));
        }
        for critic in [&reward_critic, &cost_critic] {
            if critic.spec().outputs != 1 || critic.spec().action_inputs != n_a {
                return Err(dim_mismatch(
                    "AgentBundle critic (outputs, action inputs)",
                    (1, n_a),
                    (critic.spec().outputs, critic.spec().action_inputs),
                ));
            }
        }
        let adam = |net: &Network, lr: f64| {
            AdamState::new(net.params(), AdamConfig::with_learning_rate(lr))
        };
        Ok(Self {
            budget: episode_budget(scenario, config.gamma),
            actor_opt: adam(&actor, config.actor_lr),
            reward_opt: adam(&reward_critic, config.reward_critic_lr),
            cost_opt: adam(&cost_critic, config.cost_critic_lr),
            noise: OuNoise::new(n_a, config.ou_mu, config.ou_theta, config.ou_sigma),
            dual: DualVariable::with_lambda(config.initial_lambda, config.dual_lr),
            replay: ReplayBuffer::new(config.buffer_capacity),
            actor_target: actor.clone(),
            reward_target: reward_critic.clone(),
            cost_target: cost_critic.clone(),
            actor,
            reward_critic,
            cost_critic,
            scenario: scenario.clone(),
            config,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.dual.lambda()
    }

    /// Errors unless observations of `cfg` fit the networks.
    pub fn check_compatible(&self, cfg: &ScenarioConfig) -> Result<()> {
        let want = NetSpec::actor(cfg);
        let have = self.actor.spec();
        if want.channel_shape != have.channel_shape
            || want.position_shape != have.position_shape
            || want.outputs != have.outputs
        {
            return Err(dim_mismatch(
                "AgentBundle vs environment",
                (have.channel_shape, have.position_shape, have.outputs),
                (want.channel_shape, want.position_shape, want.outputs),
            ));
        }
        Ok(())
    }

    /// Deterministic actor output `μ(s)`.
    pub fn actor_output(&self, state: &EnvState) -> Result<Vec<f64>> {
        let y = self.actor.predict(&batch_input(&[state], None)?)?;
        Ok(y.row(0).to_vec())
    }

    /// `Q_R(s, a) − λ (Q_C(s, a) − Γ_c)` for each candidate.
    pub fn lagrangian_scores(
        &self,
        state: &EnvState,
        candidates: &[ActionCode],
    ) -> Result<Vec<f64>> {
        let states = vec![state; candidates.len()];
        let actions: Vec<&[f64]> = candidates.iter().map(|c| c.raw.as_slice()).collect();
        let input = batch_input(&states, Some(&actions))?;
        let qr = self.reward_critic.predict(&input)?;
        let qc = self.cost_critic.predict(&input)?;
        let (lambda, gamma_c) = (self.lambda(), self.budget.gamma_c);
        Ok(qr
            .iter()
            .zip(qc.iter())
            .map(|(r, c)| r - lambda * (c - gamma_c))
            .collect())
    }

    /// Wolpertinger selection. Returns the (possibly noisy) proto-action and
    /// the executed code. Score ties go to the lexicographically smaller code.
    pub fn select_action(
        &mut self,
        state: &EnvState,
        users: usize,
        explore: bool,
        rng: &mut SimRng,
    ) -> Result<(Vec<f64>, ActionCode)> {
        let mut proto = self.actor_output(state)?;
        if explore {
            let noise = self.noise.sample(rng);
            proto.iter_mut().zip(noise).for_each(|(a, n)| *a += n);
        }
        let candidates = knn_binary(&proto, self.config.candidates, users, &self.scenario)?;
        let scores = self.lagrangian_scores(state, &candidates)?;
        let best = candidates
            .into_iter()
            .zip(scores)
            .reduce(|best, next| {
                let key = |c: &ActionCode| (c.user, c.codeword);
                if next.1 > best.1 || (next.1 == best.1 && key(&next.0) < key(&best.0)) {
                    next
                } else {
                    best
                }
            })
            .map(|(c, _)| c)
            .ok_or(IsacError::EmptyInput("select_action candidates"))?;
        Ok((proto, best))
    }

    /// One-step targets `y = r + γ Q'_R(s', μ'(s'))`, `z = c + γ Q'_C(s', μ'(s'))`
    /// from the target networks; terminal transitions do not bootstrap.
    pub fn compute_targets(&self, batch: &[Transition]) -> Result<(Vec<f64>, Vec<f64>)> {
        let next: Vec<&EnvState> = batch.iter().map(|t| &t.next_state).collect();
        let input = batch_input(&next, None)?;
        let a_next = self.actor_target.predict(&input)?;
        let input = NetInput {
            action: Some(a_next),
            ..input
        };
        let qr = self.reward_target.predict(&input)?;
        let qc = self.cost_target.predict(&input)?;
        let gamma = self.config.gamma;
        let (mut y, mut z) = (
            Vec::with_capacity(batch.len()),
            Vec::with_capacity(batch.len()),
        );
        for (i, t) in batch.iter().enumerate() {
            let w = if t.done { 0.0 } else { gamma };
            y.push(t.reward + w * qr[[i, 0]]);
            z.push(t.cost + w * qc[[i, 0]]);
        }
        Ok((y, z))
    }

    fn state_action_input(batch: &[Transition]) -> Result<NetInput> {
        let states: Vec<&EnvState> = batch.iter().map(|t| &t.state).collect();
        let actions: Vec<&[f64]> = batch.iter().map(|t| t.action.as_slice()).collect();
        batch_input(&states, Some(&actions))
    }

    /// One Adam step per critic on the mean-square error against `y` and
    /// `z`; returns the pre-step losses `(L_R, L_C)`.
    pub fn update_critics(
        &mut self,
        batch: &[Transition],
        y: &[f64],
        z: &[f64],
    ) -> Result<(f64, f64)> {
        if y.len() != batch.len() || z.len() != batch.len() {
            return Err(dim_mismatch(
                "update_critics targets",
                batch.len(),
                (y.len(), z.len()),
            ));
        }
        let input = Self::state_action_input(batch)?;
        let column =
            |v: &[f64]| Array2::from_shape_vec((v.len(), 1), v.to_vec()).expect("column shape");
        let step = |net: &mut Network, opt: &mut AdamState, target: &[f64]| -> Result<f64> {
            let (q, cache) = net.forward(&input)?;
            let (loss, dq) = mse_loss(&q, &column(target))?;
            let grads = net.backward(&cache, &dq)?;
            adam_step(net.params_mut(), &grads.params, opt)?;
            Ok(loss)
        };
        let lr = step(&mut self.reward_critic, &mut self.reward_opt, y)?;
        let lc = step(&mut self.cost_critic, &mut self.cost_opt, z)?;
        Ok((lr, lc))
    }

    /// Gradient of `(1/N) Σ [Q_R(s, μ(s)) − λ Q_C(s, μ(s))]` with respect to
    /// the actor parameters.
    pub fn actor_gradient(&self, batch: &[Transition]) -> Result<crate::neural::ParamSet> {
        let states: Vec<&EnvState> = batch.iter().map(|t| &t.state).collect();
        let input = batch_input(&states, None)?;
        let (a, actor_cache) = self.actor.forward(&input)?;
        let input = NetInput {
            action: Some(a),
            ..input
        };
        let (qr, cache_r) = self.reward_critic.forward(&input)?;
        let (qc, cache_c) = self.cost_critic.forward(&input)?;
        let (_, d_mean) = mean_output(&qr);
        let dr = self.reward_critic.backward(&cache_r, &d_mean)?;
        let dc = self
            .cost_critic
            .backward(&cache_c, &(mean_output(&qc).1 * -self.lambda()))?;
        let da =
            dr.action.expect("critic takes actions") + dc.action.expect("critic takes actions");
        Ok(self.actor.backward(&actor_cache, &da)?.params)
    }

    /// One Adam ascent step on the actor; critics are untouched. Returns the
    /// gradient norm.
    pub fn update_actor(&mut self, batch: &[Transition]) -> Result<f64> {
        let mut grads = self.actor_gradient(batch)?;
        let norm = grads.l2_norm();
        grads.scale(-1.0);
        adam_step(self.actor.params_mut(), &grads, &mut self.actor_opt)?;
        Ok(norm)
    }

    /// Projected dual ascent on the batch mean of `Q_C(s, μ(s)) − Γ_c`.
    pub fn update_dual(&mut self, batch: &[Transition]) -> Result<f64> {
        let states: Vec<&EnvState> = batch.iter().map(|t| &t.state).collect();
        let input = batch_input(&states, None)?;
        let a = self.actor.predict(&input)?;
        let qc = self.cost_critic.predict(&NetInput {
            action: Some(a),
            ..input
        })?;
        let violation = qc.iter().map(|q| q - self.budget.gamma_c).sum::<f64>() / qc.len() as f64;
        Ok(self.dual.update(violation))
    }

    pub fn soft_update_targets(&mut self) -> Result<()> {
        let tau = self.config.tau_soft;
        soft_update(self.actor_target.params_mut(), self.actor.params(), tau)?;
        soft_update(
            self.reward_target.params_mut(),
            self.reward_critic.params(),
            tau,
        )?;
        soft_update(
            self.cost_target.params_mut(),
            self.cost_critic.params(),
            tau,
        )
    }

    /// One full learning iteration on a sampled batch (targets, critics,
    /// actor, dual, soft update). `None` while the buffer holds less than a
    /// batch.
    pub fn learn_step(&mut self, rng: &mut SimRng) -> Result<Option<(f64, f64)>> {
        if self.replay.len() < self.config.batch_size {
            return Ok(None);
        }
        let batch = self.replay.sample(self.config.batch_size, rng)?;
        let (y, z) = self.compute_targets(&batch)?;
        let losses = self.update_critics(&batch, &y, &z)?;
        self.update_actor(&batch)?;
        self.update_dual(&batch)?;
        self.soft_update_targets()?;
        Ok(Some(losses))
    }

    fn networks(&self) -> [(&'static str, &Network); 6] {
        [
            ("actor", &self.actor),
            ("actor_target", &self.actor_target),
            ("reward_critic", &self.reward_critic),
            ("reward_target", &self.reward_target),
            ("cost_critic", &self.cost_critic),
            ("cost_target", &self.cost_target),
        ]
    }

    /// Writes all six networks plus λ and the config into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, net) in self.networks() {
            save_checkpoint(net, &dir.join(name))?;
        }
        let meta = AgentMeta {
            lambda: self.lambda(),
            config: self.config.clone(),
        };
        let text = serde_json::to_string_pretty(&meta)
            .map_err(|e| IsacError::Checkpoint(e.to_string()))?;
        std::fs::write(dir.join("agent.json"), text)?;
        Ok(())
    }

    /// Restores a bundle saved by [`AgentBundle::save`]; optimiser moments,
    /// noise and replay start fresh.
    pub fn load(dir: &Path, scenario: &ScenarioConfig) -> Result<Self> {
        let text = std::fs::read_to_string(dir.join("agent.json"))?;
        let meta: AgentMeta =
            serde_json::from_str(&text).map_err(|e| IsacError::Checkpoint(e.to_string()))?;
        let load = |name: &str| load_checkpoint(&dir.join(name));
        let mut bundle = Self::with_networks(
            scenario,
            meta.config,
            load("actor")?,
            load("reward_critic")?,
            load("cost_critic")?,
        )?;
        bundle.actor_target = load("actor_target")?;
        bundle.reward_target = load("reward_target")?;
        bundle.cost_target = load("cost_target")?;
        bundle.dual = DualVariable::with_lambda(meta.lambda, bundle.config.dual_lr);
        Ok(bundle)
    }
}
