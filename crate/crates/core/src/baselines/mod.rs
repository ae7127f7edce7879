//! Reference policies sharing the environment interface. Greedy and
//! exhaustive search read the true upcoming subframe through an
//! [`EnvSnapshot`], so they are oracle-information baselines; the learned
//! agent never sees that snapshot.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::ScenarioConfig;
use crate::env::{ActionCode, EnvSnapshot};
use crate::error::{IsacError, Result};
use crate::math::SimRng;
use crate::metrics::{MetricsReport, Precoder};

/// Default cap on the number of full precoders exhaustive search may enumerate.
pub const EXHAUSTIVE_BUDGET: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Random,
    Greedy,
    Exhaustive,
    Agent,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [Self::Agent, Self::Random, Self::Greedy, Self::Exhaustive];

    pub fn name(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::Greedy => "greedy",
            Self::Exhaustive => "exhaustive",
            Self::Agent => "agent",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = IsacError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                IsacError::Parse(format!(
                    "unknown policy `{s}` (expected agent, random, greedy or exhaustive)"
                ))
            })
    }
}

/// Uniform draw over the `users · N_B` feasible edits.
pub fn random_policy(users: usize, cfg: &ScenarioConfig, rng: &mut SimRng) -> ActionCode {
    let i = rng.index(users.max(1) * cfg.codebook_size);
    ActionCode::from_indices(i / cfg.codebook_size, i % cfg.codebook_size, cfg)
}

/// Feasibility-first ranking: SINR-feasible candidates beat infeasible ones;
/// feasible candidates rank by lower CRLB, infeasible ones by larger worst
/// SINR margin. Returns true when `a` is strictly better than `b`.
fn better(a: &MetricsReport, b: &MetricsReport) -> bool {
    let (fa, fb) = (a.constraints.violations == 0, b.constraints.violations == 0);
    match (fa, fb) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => a.crlb < b.crlb,
        (false, false) => a.constraints.worst_margin > b.constraints.worst_margin,
    }
}

/// Picks the best candidate; ties keep the earliest.
fn select<T>(
    candidates: impl Iterator<Item = Result<(T, MetricsReport)>>,
) -> Result<(T, MetricsReport)> {
    let mut best: Option<(T, MetricsReport)> = None;
    for c in candidates {
        let (item, report) = c?;
        if best.as_ref().is_none_or(|(_, b)| better(&report, b)) {
            best = Some((item, report));
        }
    }
    best.ok_or(IsacError::EmptyInput("baseline search"))
}

/// Best single-column substitution of the snapshot's current precoder.
pub fn greedy_policy(
    snapshot: &EnvSnapshot,
    users: usize,
    cfg: &ScenarioConfig,
) -> Result<ActionCode> {
    let candidates = (0..users)
        .flat_map(|u| (0..cfg.codebook_size).map(move |c| (u, c)))
        .map(|(u, c)| {
            let mut p = snapshot.precoder.clone();
            p.replace_column(u, c, &snapshot.codebook)?;
            Ok(((u, c), snapshot.evaluate(&p)?))
        });
    let ((u, c), _) = select(candidates)?;
    Ok(ActionCode::from_indices(u, c, cfg))
}

/// Number of full precoders `N_B^U`, saturating.
pub fn exhaustive_size(users: usize, cfg: &ScenarioConfig) -> u128 {
    (0..users).fold(1u128, |acc, _| {
        acc.saturating_mul(cfg.codebook_size as u128)
    })
}

/// Best full precoder over all `N_B^U` codeword assignments (myopic: only
/// the upcoming subframe is scored). Refuses search spaces above `budget`.
pub fn exhaustive_policy(
    snapshot: &EnvSnapshot,
    users: usize,
    cfg: &ScenarioConfig,
    budget: u128,
) -> Result<Precoder> {
    let size = exhaustive_size(users, cfg);
    if size > budget {
        return Err(IsacError::SearchBudgetExceeded { size, budget });
    }
    let n_b = cfg.codebook_size;
    let candidates = (0..size as usize).map(|mut i| {
        let mut codes = vec![0; users];
        for slot in codes.iter_mut().rev() {
            *slot = i % n_b;
            i /= n_b;
        }
        let p = Precoder::from_codewords(&snapshot.codebook, &codes);
        let report = snapshot.evaluate(&p)?;
        Ok((p, report))
    });
    select(candidates).map(|(p, _)| p)
}
