use serde::{Deserialize, Serialize};

use super::{crlb, sinr_table, spectral_efficiency, Precoder, SinrTable, TargetState};
use crate::channel::{ChannelRealization, ScenarioConfig};
use crate::error::Result;

/// Unit-modulus tolerance of precoder entries.
const MODULUS_TOL: f64 = 1e-9;

/// Feasibility of one subframe: SINR threshold per `(u, m, l)` and unit
/// modulus of the precoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// `γ ≥ τ` per entry, laid out like the SINR table.
    pub sinr_ok: Vec<bool>,
    pub violations: usize,
    /// `min γ − τ`; negative iff some entry is violated.
    pub worst_margin: f64,
    pub constant_modulus: bool,
}

impl ConstraintReport {
    pub fn feasible(&self) -> bool {
        self.violations == 0 && self.constant_modulus
    }
}

pub fn check_constraints(
    table: &SinrTable,
    precoder: &Precoder,
    threshold: f64,
) -> ConstraintReport {
    let sinr_ok: Vec<bool> = table.values().iter().map(|&g| g >= threshold).collect();
    ConstraintReport {
        violations: sinr_ok.iter().filter(|ok| !**ok).count(),
        sinr_ok,
        worst_margin: table.min() - threshold,
        constant_modulus: precoder.is_constant_modulus(MODULUS_TOL),
    }
}

pub const METRICS_CSV_HEADER: &str =
    "se,crlb,fisher_total,min_sinr,mean_sinr,sinr_violations,worst_margin,constant_modulus,constraint_ok";

/// Communication and sensing performance of one subframe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub sinr: SinrTable,
    pub se: f64,
    pub fisher_per_subcarrier: Vec<f64>,
    pub crlb: f64,
    pub crlb_degenerate: bool,
    pub constraints: ConstraintReport,
    pub constraint_ok: bool,
}

impl MetricsReport {
    /// Row matching [`METRICS_CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.se,
            self.crlb,
            self.fisher_per_subcarrier.iter().sum::<f64>(),
            self.sinr.min(),
            self.sinr.mean(),
            self.constraints.violations,
            self.constraints.worst_margin,
            self.constraints.constant_modulus,
            self.constraint_ok
        )
    }
}

pub fn evaluate_subframe(
    realization: &ChannelRealization,
    precoder: &Precoder,
    target: &TargetState,
    cfg: &ScenarioConfig,
) -> Result<MetricsReport> {
    let sinr = sinr_table(realization, precoder.matrix(), cfg)?;
    let se = spectral_efficiency(&sinr, cfg);
    let c = crlb(precoder.matrix(), target, cfg)?;
    let constraints = check_constraints(&sinr, precoder, cfg.sinr_threshold);
    Ok(MetricsReport {
        se,
        fisher_per_subcarrier: c.fisher,
        crlb: c.value,
        crlb_degenerate: c.degenerate,
        constraint_ok: constraints.feasible(),
        constraints,
        sinr,
    })
}
