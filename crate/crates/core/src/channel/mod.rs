//! Doubly-selective multi-user channel: path sampling, per-sample tap
//! responses with intra-symbol Doppler, the frequency-domain ICI blocks, and
//! the kinematics that move users, scatterers and the target between
//! subframes.

mod config;
mod kinematics;
mod paths;
mod realization;

pub use config::ScenarioConfig;
pub use kinematics::{evolve_subframe, KinematicEntity};
pub use paths::{doppler_omega, sample_paths, PathParams};
pub use realization::{ChannelRealization, FreqBlocks, PrecodedBlocks};
