use serde::{Deserialize, Serialize};

use super::params::ParamSet;
use crate::error::{dim_mismatch, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamConfig {
    pub fn with_learning_rate(learning_rate: f64) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Moment estimates for one parameter set; shapes mirror it.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    first: ParamSet,
    second: ParamSet,
    step: u64,
}

impl AdamState {
    pub fn new(params: &ParamSet, config: AdamConfig) -> Self {
        Self {
            config,
            first: params.zeros_like(),
            second: params.zeros_like(),
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// One bias-corrected Adam descent step: `params ← params − lr · m̂ / (√v̂ + ε)`.
/// Gradient ascent is a descent step on the negated gradient.
pub fn adam_step(params: &mut ParamSet, grads: &ParamSet, state: &mut AdamState) -> Result<()> {
    if !params.same_layout(grads) || !params.same_layout(&state.first) {
        return Err(dim_mismatch("adam_step", params.shapes(), grads.shapes()));
    }
    state.step += 1;
    let AdamConfig {
        learning_rate,
        beta1,
        beta2,
        epsilon,
    } = state.config;
    let t = i32::try_from(state.step).unwrap_or(i32::MAX);
    let c1 = 1.0 - beta1.powi(t);
    let c2 = 1.0 - beta2.powi(t);
    let tensors = params
        .iter_mut()
        .zip(grads.iter())
        .zip(state.first.iter_mut().zip(state.second.iter_mut()));
    for ((p, g), (m, v)) in tensors {
        ndarray::Zip::from(&mut p.value)
            .and(&g.value)
            .and(&mut m.value)
            .and(&mut v.value)
            .for_each(|p, &g, m, v| {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                *p -= learning_rate * (*m / c1) / ((*v / c2).sqrt() + epsilon);
            });
    }
    Ok(())
}
