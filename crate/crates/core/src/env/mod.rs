//! The constrained MDP around the channel and metric models.
//!
//! One episode is one frame of `T` subframes. Each step replaces a single
//! precoder column, simulates the subframe and returns reward `−CRLB`
//! (optionally normalised) and cost `−SE`. The channel part of the
//! observation is captured at reset and frozen for the frame; the position
//! part is a three-slot shift register of angle-range spectra.

mod action;
mod budget;
mod state;
mod trace;

use std::sync::Arc;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

pub use action::{decode_action, encode_action, feasible_codes, ActionCode};
pub use budget::{discounted_sum, episode_budget, EpisodeBudget};
pub use state::{
    angular_dictionary, build_channel_state, build_position_spectrum, grid_cell, EnvState,
    CELL_EMPTY, CELL_TARGET, CELL_USER, SPECTRUM_HISTORY,
};
pub use trace::{TraceRow, TRACE_CSV_HEADER};

use crate::channel::{ChannelRealization, PathParams, ScenarioConfig};
use crate::error::{IsacError, Result};
use crate::math::{Codebook, ComplexMatrix, SimRng};
use crate::metrics::{crlb, evaluate_subframe, MetricsReport, Precoder, TargetState};

/// Random precoders averaged for the reward scale at reset.
pub const REWARD_SCALE_DRAWS: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    /// `−CRLB / ρ`, `ρ` the mean CRLB of random precoders at reset.
    #[default]
    Normalized,
    Raw,
}

/// Result of one subframe.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub next_state: EnvState,
    pub reward: f64,
    pub cost: f64,
    pub done: bool,
    /// `(user, codeword)` of a single-column edit; `None` when a whole
    /// precoder was installed.
    pub edit: Option<(usize, usize)>,
    pub info: MetricsReport,
}

/// Ground truth of the upcoming subframe, for oracle-information policies.
#[derive(Clone, Debug)]
pub struct EnvSnapshot {
    pub realization: ChannelRealization,
    pub target: TargetState,
    pub precoder: Precoder,
    pub codebook: Codebook,
}

impl EnvSnapshot {
    pub fn evaluate(&self, precoder: &Precoder) -> Result<MetricsReport> {
        evaluate_subframe(
            &self.realization,
            precoder,
            &self.target,
            self.realization.config(),
        )
    }
}

struct Episode {
    users: Vec<Vec<PathParams>>,
    target: TargetState,
    precoder: Precoder,
    state: EnvState,
    reward_scale: f64,
    t: usize,
    alpha_rng: SimRng,
    detector_rng: SimRng,
}

pub struct IsacEnv {
    cfg: ScenarioConfig,
    codebook: Codebook,
    dictionary: ComplexMatrix,
    reward_mode: RewardMode,
    episode: Option<Episode>,
}

impl IsacEnv {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            codebook: Codebook::new(cfg.tx_antennas, cfg.codebook_size),
            dictionary: angular_dictionary(cfg),
            cfg: cfg.clone(),
            reward_mode: RewardMode::default(),
            episode: None,
        })
    }

    pub fn with_reward_mode(mut self, mode: RewardMode) -> Self {
        self.reward_mode = mode;
        self
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn users(&self) -> usize {
        self.cfg.users
    }

    /// Subframe index of the next step.
    pub fn t(&self) -> usize {
        self.episode.as_ref().map_or(0, |e| e.t)
    }

    pub fn done(&self) -> bool {
        self.episode
            .as_ref()
            .is_none_or(|e| e.t >= self.cfg.subframes)
    }

    pub fn precoder(&self) -> Option<&Precoder> {
        self.episode.as_ref().map(|e| &e.precoder)
    }

    pub fn target(&self) -> Option<&TargetState> {
        self.episode.as_ref().map(|e| &e.target)
    }

    pub fn reward_scale(&self) -> Option<f64> {
        self.episode.as_ref().map(|e| e.reward_scale)
    }

    /// Starts a frame: fresh kinematics, frame-start tap estimates, initial
    /// spectrum replicated into every slot and a random initial precoder.
    /// Consumes exactly one draw of `rng`.
    pub fn reset(&mut self, rng: &mut SimRng) -> Result<EnvState> {
        let cfg = &self.cfg;
        let ep = rng.fork("episode");
        let mut channel_rng = ep.substream("channel");
        let users: Vec<Vec<PathParams>> = (0..cfg.users)
            .map(|_| crate::channel::sample_paths(cfg, &mut channel_rng))
            .collect();
        let target = TargetState::sample(cfg, &mut ep.substream("target"));
        let precoder = Precoder::random(&self.codebook, cfg.users, &mut ep.substream("precoder"));

        let mut csi_rng = ep.substream("csi");
        let var = cfg.csi_error_std * cfg.csi_error_std;
        let taps: Vec<ComplexMatrix> = ChannelRealization::new(cfg, users.clone())
            .tap_snapshot()
            .into_iter()
            .map(|h| {
                if var > 0.0 {
                    ComplexMatrix::from_fn(h.rows(), h.cols(), |i, j| {
                        h[(i, j)] + csi_rng.complex_normal(var)
                    })
                } else {
                    h
                }
            })
            .collect();
        let channel = build_channel_state(&taps, &self.dictionary, cfg)?;

        let mut detector_rng = ep.substream("detector");
        let first = self.spectrum(&users, &target, &mut detector_rng);
        let first = Arc::new(first);
        let state = EnvState {
            channel: Arc::new(channel),
            spectra: [Arc::clone(&first), Arc::clone(&first), first],
        };

        let mut scale_rng = ep.substream("reward-scale");
        let mut total = 0.0;
        let mut finite = 0usize;
        for _ in 0..REWARD_SCALE_DRAWS {
            let p = Precoder::random(&self.codebook, cfg.users, &mut scale_rng);
            let c = crlb(p.matrix(), &target, cfg)?.value;
            if c.is_finite() {
                total += c;
                finite += 1;
            }
        }
        let reward_scale = if finite > 0 && total > 0.0 {
            total / finite as f64
        } else {
            1.0
        };

        self.episode = Some(Episode {
            users,
            target,
            precoder,
            state: state.clone(),
            reward_scale,
            t: 0,
            alpha_rng: ep.substream("alpha"),
            detector_rng,
        });
        Ok(state)
    }

    fn spectrum(
        &self,
        users: &[Vec<PathParams>],
        target: &TargetState,
        rng: &mut SimRng,
    ) -> Array2<u8> {
        let cfg = &self.cfg;
        let std = cfg.position_noise_std;
        let d_angle = (cfg.angle_max - cfg.angle_min) / cfg.grid_angle_bins as f64;
        let d_range = (cfg.range_max - cfg.range_min) / cfg.grid_range_bins as f64;
        let mut detect = |angle: f64, range: f64| {
            if std > 0.0 {
                (
                    angle + std * d_angle * rng.standard_normal(),
                    range + std * d_range * rng.standard_normal(),
                )
            } else {
                (angle, range)
            }
        };
        // A user's position is the scatterer of its first path.
        let user_pos: Vec<(f64, f64)> = users
            .iter()
            .map(|p| detect(p[0].scatterer.angle, p[0].scatterer.range))
            .collect();
        let target_pos = detect(target.entity.angle, target.entity.range);
        build_position_spectrum(&user_pos, &[target_pos], cfg)
    }

    fn episode(&self) -> Result<&Episode> {
        match &self.episode {
            Some(e) if e.t < self.cfg.subframes => Ok(e),
            _ => Err(IsacError::EpisodeFinished),
        }
    }

    pub fn state(&self) -> Option<&EnvState> {
        self.episode.as_ref().map(|e| &e.state)
    }

    /// Ground truth of the upcoming subframe with the current precoder.
    pub fn snapshot(&self) -> Result<EnvSnapshot> {
        let ep = self.episode()?;
        Ok(EnvSnapshot {
            realization: ChannelRealization::new(&self.cfg, ep.users.clone()),
            target: ep.target.clone(),
            precoder: ep.precoder.clone(),
            codebook: self.codebook.clone(),
        })
    }

    /// Replaces one precoder column and simulates the subframe.
    pub fn step(&mut self, action: &ActionCode) -> Result<StepOutcome> {
        self.episode()?;
        let users = self.cfg.users;
        let (user, codeword) = (
            action.user % users,
            action.codeword % self.cfg.codebook_size,
        );
        let mut precoder = self.episode()?.precoder.clone();
        precoder.replace_column(user, codeword, &self.codebook)?;
        self.advance(precoder, Some((user, codeword)))
    }

    /// Installs a whole precoder (used by the exhaustive baseline) and
    /// simulates the subframe.
    pub fn step_with_precoder(&mut self, precoder: Precoder) -> Result<StepOutcome> {
        self.episode()?;
        if precoder.users() != self.cfg.users || precoder.matrix().rows() != self.cfg.tx_antennas {
            return Err(crate::error::dim_mismatch(
                "IsacEnv::step_with_precoder",
                (self.cfg.tx_antennas, self.cfg.users),
                precoder.matrix().shape(),
            ));
        }
        self.advance(precoder, None)
    }

    fn advance(&mut self, precoder: Precoder, edit: Option<(usize, usize)>) -> Result<StepOutcome> {
        let cfg = self.cfg.clone();
        let mut ep = self.episode.take().ok_or(IsacError::EpisodeFinished)?;
        ep.precoder = precoder;
        ep.target.redraw_alpha(&cfg, &mut ep.alpha_rng);
        let realization = ChannelRealization::new(&cfg, ep.users.clone());
        let info = match evaluate_subframe(&realization, &ep.precoder, &ep.target, &cfg) {
            Ok(info) => info,
            Err(e) => {
                self.episode = Some(ep);
                return Err(e);
            }
        };
        let reward = match self.reward_mode {
            RewardMode::Normalized => -info.crlb / ep.reward_scale,
            RewardMode::Raw => -info.crlb,
        };
        let cost = -info.se;

        let latest = self.spectrum(&ep.users, &ep.target, &mut ep.detector_rng);
        ep.state = ep.state.shifted(latest);

        let dt = cfg.subframe_duration();
        for path in ep.users.iter_mut().flatten() {
            path.advance(dt, &cfg);
        }
        ep.target.entity.advance(dt, &cfg);
        ep.t += 1;
        let done = ep.t >= cfg.subframes;
        let next_state = ep.state.clone();
        self.episode = Some(ep);
        Ok(StepOutcome {
            next_state,
            reward,
            cost,
            done,
            edit,
            info,
        })
    }
}
