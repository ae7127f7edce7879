//! Communication and sensing performance functionals.
//!
//! Communication: per-user, per-subcarrier SINR including inter-carrier and
//! inter-user interference, and the spectral efficiency derived from it.
//! Sensing: monostatic echo synthesis, the angle Fisher information per
//! subcarrier and the resulting CRLB. [`check_constraints`] evaluates the
//! per-subframe SINR and constant-modulus feasibility conditions.

mod comm;
mod precoder;
mod report;
mod sensing;

pub use comm::{sinr, sinr_precoded, sinr_table, spectral_efficiency, SinrTable};
pub use precoder::Precoder;
pub use report::{
    check_constraints, evaluate_subframe, ConstraintReport, MetricsReport, METRICS_CSV_HEADER,
};
pub use sensing::{
    averaged_crlb, crlb, crlb_monte_carlo, draw_alpha, fisher_geometry, fisher_subcarrier,
    reflection_amplitude_db, simulate_echo, unit_symbols, Crlb, FisherGeometry, FisherInfo,
    TargetState,
};
