use serde::{Deserialize, Serialize};

use crate::channel::ScenarioConfig;

/// Discount and per-episode SE budget of the constrained objective.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeBudget {
    pub gamma: f64,
    /// Per-subframe SE threshold `U log2(1 + τ) / (T_s Δf)`.
    pub eta_c: f64,
    /// Cumulative cost budget `−Σ_{t<T} γ^t η_c`.
    pub gamma_c: f64,
}

pub fn episode_budget(cfg: &ScenarioConfig, gamma: f64) -> EpisodeBudget {
    let eta_c = cfg.users as f64 * (1.0 + cfg.sinr_threshold).log2()
        / (cfg.symbol_period() * cfg.subcarrier_spacing_hz);
    let gamma_c = -eta_c * discount_weights(gamma, cfg.subframes).sum::<f64>();
    EpisodeBudget {
        gamma,
        eta_c,
        gamma_c,
    }
}

fn discount_weights(gamma: f64, n: usize) -> impl Iterator<Item = f64> {
    std::iter::successors(Some(1.0), move |w| Some(w * gamma)).take(n)
}

/// `Σ_t γ^t x_t`.
pub fn discounted_sum(values: &[f64], gamma: f64) -> f64 {
    values
        .iter()
        .zip(discount_weights(gamma, values.len()))
        .map(|(v, w)| v * w)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_examples() {
        let cfg = ScenarioConfig::default();
        let b = episode_budget(&cfg, 0.6);
        assert!((b.eta_c - 4.0 * 3f64.log2()).abs() < 1e-12);
        assert!((b.eta_c - 6.3399).abs() < 1e-4);

        let cfg1 = ScenarioConfig {
            subframes: 7,
            ..cfg.clone()
        };
        let undiscounted = episode_budget(&cfg1, 1.0);
        assert!((undiscounted.gamma_c + 7.0 * undiscounted.eta_c).abs() < 1e-12);

        let cfg2 = ScenarioConfig {
            subframes: 2,
            ..cfg
        };
        let two = episode_budget(&cfg2, 0.6);
        assert!((two.gamma_c + 1.6 * two.eta_c).abs() < 1e-12);
    }

    #[test]
    fn discounted_sum_matches_loop() {
        let v = [1.0, -2.0, 0.5, 3.0];
        let expected = 1.0 - 2.0 * 0.6 + 0.5 * 0.36 + 3.0 * 0.216;
        assert!((discounted_sum(&v, 0.6) - expected).abs() < 1e-15);
        assert_eq!(discounted_sum(&[], 0.6), 0.0);
    }
}
