use serde::{Deserialize, Serialize};

use crate::channel::ScenarioConfig;
use crate::error::{dim_mismatch, Result};

/// One precoder edit: replace column `user` with codeword `codeword`.
///
/// `raw` is the length-`N_A` vector the edit was decoded from: user bits
/// first, then codeword bits, both big-endian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionCode {
    pub raw: Vec<f64>,
    pub user: usize,
    pub codeword: usize,
}

impl ActionCode {
    /// Binary code of a feasible `(user, codeword)` pair.
    pub fn from_indices(user: usize, codeword: usize, cfg: &ScenarioConfig) -> Self {
        Self {
            raw: encode_action(user, codeword, cfg),
            user,
            codeword,
        }
    }
}

fn bits_to_index(bits: &[f64]) -> usize {
    bits.iter()
        .fold(0, |acc, &b| (acc << 1) | usize::from(b >= 0.5))
}

fn push_bits(out: &mut Vec<f64>, value: usize, width: usize) {
    out.extend((0..width).rev().map(|i| ((value >> i) & 1) as f64));
}

/// Rounds every coordinate to `{0, 1}` (`≥ 0.5 → 1`) and reads the two
/// indices. The user index is reduced modulo `users` and the codeword index
/// modulo `N_B`, so every code decodes to a valid edit.
pub fn decode_action(raw: &[f64], users: usize, cfg: &ScenarioConfig) -> Result<ActionCode> {
    if raw.len() != cfg.action_bits() {
        return Err(dim_mismatch("decode_action", cfg.action_bits(), raw.len()));
    }
    let (u_bits, c_bits) = raw.split_at(cfg.user_bits());
    Ok(ActionCode {
        raw: raw.to_vec(),
        user: bits_to_index(u_bits) % users.max(1),
        codeword: bits_to_index(c_bits) % cfg.codebook_size,
    })
}

pub fn encode_action(user: usize, codeword: usize, cfg: &ScenarioConfig) -> Vec<f64> {
    let mut out = Vec::with_capacity(cfg.action_bits());
    push_bits(&mut out, user, cfg.user_bits());
    push_bits(&mut out, codeword, cfg.code_bits());
    out
}

/// All binary codes with `user < users` and `codeword < N_B`, in
/// lexicographic (equivalently, numeric big-endian) order.
pub fn feasible_codes(users: usize, cfg: &ScenarioConfig) -> Vec<ActionCode> {
    let mut out = Vec::with_capacity(users * cfg.codebook_size);
    for u in 0..users {
        for c in 0..cfg.codebook_size {
            out.push(ActionCode::from_indices(u, c, cfg));
        }
    }
    out
}
