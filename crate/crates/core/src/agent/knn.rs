use crate::channel::ScenarioConfig;
use crate::env::{feasible_codes, ActionCode};
use crate::error::{dim_mismatch, Result};

/// The `k` feasible codes nearest to `a_tilde` in Euclidean distance, closest
/// first. Equal distances keep lexicographic code order; `k` is clamped to
/// `1..=users·N_B`.
pub fn knn_binary(
    a_tilde: &[f64],
    k: usize,
    users: usize,
    cfg: &ScenarioConfig,
) -> Result<Vec<ActionCode>> {
    if a_tilde.len() != cfg.action_bits() {
        return Err(dim_mismatch("knn_binary", cfg.action_bits(), a_tilde.len()));
    }
    let mut scored: Vec<(f64, ActionCode)> = feasible_codes(users, cfg)
        .into_iter()
        .map(|code| {
            let d: f64 = code
                .raw
                .iter()
                .zip(a_tilde)
                .map(|(b, a)| (b - a) * (b - a))
                .sum();
            (d, code)
        })
        .collect();
    // Stable sort: ties stay in the lexicographic enumeration order.
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = k.clamp(1, scored.len().max(1));
    Ok(scored.into_iter().take(k).map(|(_, c)| c).collect())
}
