use serde::{Deserialize, Serialize};

use crate::math::SimRng;

/// Ornstein–Uhlenbeck exploration noise,
/// `x ← x + θ(μ − x) + σ·N(0, 1)` per coordinate and step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuNoise {
    pub mu: f64,
    pub theta: f64,
    pub sigma: f64,
    value: Vec<f64>,
}

impl OuNoise {
    pub fn new(dim: usize, mu: f64, theta: f64, sigma: f64) -> Self {
        Self {
            mu,
            theta,
            sigma,
            value: vec![mu; dim],
        }
    }

    pub fn reset(&mut self) {
        let mu = self.mu;
        self.value.iter_mut().for_each(|x| *x = mu);
    }

    pub fn value(&self) -> &[f64] {
        &self.value
    }

    /// Advances one step and returns the new value.
    pub fn sample(&mut self, rng: &mut SimRng) -> &[f64] {
        for x in &mut self.value {
            *x += self.theta * (self.mu - *x) + self.sigma * rng.standard_normal();
        }
        &self.value
    }

    /// `σ / √(2θ)`, the continuous-time stationary deviation.
    pub fn stationary_std(&self) -> f64 {
        self.sigma / (2.0 * self.theta).sqrt()
    }
}
