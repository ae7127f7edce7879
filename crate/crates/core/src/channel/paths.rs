use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{KinematicEntity, ScenarioConfig};
use crate::math::{SimRng, C64, SPEED_OF_LIGHT};

/// One resolvable propagation path of a user's channel.
///
/// The AoD, speed and heading live in the path's scatterer. The delay is the
/// scatterer's one-way propagation delay plus an excess offset drawn once,
/// so it tracks the scatterer as it moves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathParams {
    pub beta: C64,
    pub tau: f64,
    pub excess_delay: f64,
    /// Doppler phase increment per OFDM symbol period.
    pub doppler_omega: f64,
    pub scatterer: KinematicEntity,
}

/// Doppler phase per symbol: `2π f_c |v| T_s sin θ / c`.
pub fn doppler_omega(speed: f64, theta: f64, cfg: &ScenarioConfig) -> f64 {
    2.0 * PI * cfg.carrier_hz * speed * cfg.symbol_period() * theta.sin() / SPEED_OF_LIGHT
}

fn max_delay(cfg: &ScenarioConfig) -> f64 {
    (cfg.taps - 1) as f64 * cfg.sample_period()
}

impl PathParams {
    pub fn theta(&self) -> f64 {
        self.scatterer.angle
    }

    /// Re-derives delay and Doppler after the scatterer moved.
    pub fn refresh(&mut self, cfg: &ScenarioConfig) {
        let tau = self.excess_delay + self.scatterer.range / SPEED_OF_LIGHT;
        self.tau = tau.clamp(0.0, max_delay(cfg));
        self.doppler_omega = doppler_omega(self.scatterer.speed, self.scatterer.angle, cfg);
    }

    pub fn advance(&mut self, dt: f64, cfg: &ScenarioConfig) {
        self.scatterer.advance(dt, cfg);
        self.refresh(cfg);
    }
}

/// Draws the `paths_per_user` paths of one user: `β ~ CN(0, σ_β²)`,
/// `τ ~ U(0, (N_d - 1) T_sample)`, AoD uniform over the sensing sector.
pub fn sample_paths(cfg: &ScenarioConfig, rng: &mut SimRng) -> Vec<PathParams> {
    (0..cfg.paths_per_user)
        .map(|_| {
            let beta = rng.complex_normal(cfg.gain_std * cfg.gain_std);
            let scatterer = KinematicEntity::sample(cfg, rng);
            let tau0 = rng.uniform(0.0, max_delay(cfg));
            let mut path = PathParams {
                beta,
                tau: tau0,
                excess_delay: tau0 - scatterer.range / SPEED_OF_LIGHT,
                doppler_omega: 0.0,
                scatterer,
            };
            path.refresh(cfg);
            path
        })
        .collect()
}
