//! Doubly-dynamic ISAC precoding.
//!
//! A time-varying wideband MIMO-OFDM channel and target simulator,
//! communication (SINR / spectral efficiency) and sensing (Fisher information
//! / CRLB) metrics, a constrained MDP wrapping them, and a primal-dual DDPG
//! agent with Wolpertinger action selection, plus baseline policies and an
//! experiment harness.

// Validation writes `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agent;
pub mod baselines;
pub mod channel;
pub mod env;
pub mod error;
pub mod harness;
pub mod math;
pub mod metrics;
pub mod neural;

pub use channel::ScenarioConfig;
pub use error::{IsacError, Result};
