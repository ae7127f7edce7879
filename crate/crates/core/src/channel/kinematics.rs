use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ScenarioConfig;
use crate::math::SimRng;

/// A moving point (user, scatterer or target) in polar coordinates around the
/// base station. Speed and heading stay fixed within a frame; only a boundary
/// reflection changes the heading.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KinematicEntity {
    pub angle: f64,
    pub range: f64,
    pub speed: f64,
    /// Direction of motion in the Cartesian frame.
    pub heading: f64,
}

fn wrap(x: f64, lo: f64, hi: f64) -> f64 {
    lo + (x - lo).rem_euclid(hi - lo)
}

impl KinematicEntity {
    /// Position uniform over the sensing area, speed uniform in
    /// `[speed_min, speed_max]`, heading uniform in `[0, π)`.
    pub fn sample(cfg: &ScenarioConfig, rng: &mut SimRng) -> Self {
        Self {
            angle: rng.uniform(cfg.angle_min, cfg.angle_max),
            range: rng.uniform(cfg.range_min, cfg.range_max),
            speed: rng.uniform(cfg.speed_min, cfg.speed_max),
            heading: rng.uniform(0.0, PI),
        }
    }

    pub fn position(&self) -> (f64, f64) {
        (self.range * self.angle.cos(), self.range * self.angle.sin())
    }

    /// Constant-velocity move over `dt` seconds. Leaving the sensing area
    /// reflects the entity back inside and mirrors its heading.
    pub fn advance(&mut self, dt: f64, cfg: &ScenarioConfig) {
        if self.speed == 0.0 || dt == 0.0 {
            return;
        }
        let (x, y) = self.position();
        let x = x + self.speed * dt * self.heading.cos();
        let y = y + self.speed * dt * self.heading.sin();
        let mut range = x.hypot(y);
        let mut angle = if range == 0.0 { self.angle } else { y.atan2(x) };
        let mut heading = self.heading;

        let reflect_radial = |heading: f64, angle: f64| 2.0 * angle + PI - heading;
        if range >= cfg.range_max {
            range = (2.0 * cfg.range_max - range).max(cfg.range_min);
            range = range.min(cfg.range_max * (1.0 - 1e-12));
            heading = reflect_radial(heading, angle);
        } else if range < cfg.range_min {
            range = (2.0 * cfg.range_min - range).min(cfg.range_max * (1.0 - 1e-12));
            heading = reflect_radial(heading, angle);
        }

        if cfg.angle_wraps() {
            angle = wrap(angle, cfg.angle_min, cfg.angle_max);
        } else if angle < cfg.angle_min || angle >= cfg.angle_max {
            let boundary = if angle < cfg.angle_min {
                cfg.angle_min
            } else {
                cfg.angle_max - 1e-12 * (cfg.angle_max - cfg.angle_min)
            };
            angle = boundary;
            heading = 2.0 * boundary - heading;
        }

        self.range = range;
        self.angle = angle;
        self.heading = heading.rem_euclid(2.0 * PI);
    }
}

/// Advances every entity by one subframe of duration `dt`.
pub fn evolve_subframe(entities: &mut [KinematicEntity], dt: f64, cfg: &ScenarioConfig) {
    for e in entities {
        e.advance(dt, cfg);
    }
}
