use serde::{Deserialize, Serialize};

use super::StepOutcome;

pub const TRACE_CSV_HEADER: &str = "t,user_idx,code_idx,reward,cost,se,crlb,lambda,violations";

/// One line of a per-step episode trace. Index fields are empty for steps
/// that installed a whole precoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub user_idx: Option<usize>,
    pub code_idx: Option<usize>,
    pub reward: f64,
    pub cost: f64,
    pub se: f64,
    pub crlb: f64,
    pub lambda: f64,
    pub violations: usize,
}

impl TraceRow {
    pub fn from_outcome(t: usize, outcome: &StepOutcome, lambda: f64) -> Self {
        Self {
            t,
            user_idx: outcome.edit.map(|e| e.0),
            code_idx: outcome.edit.map(|e| e.1),
            reward: outcome.reward,
            cost: outcome.cost,
            se: outcome.info.se,
            crlb: outcome.info.crlb,
            lambda,
            violations: outcome.info.constraints.violations,
        }
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<usize>| v.map_or_else(String::new, |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.t,
            opt(self.user_idx),
            opt(self.code_idx),
            self.reward,
            self.cost,
            self.se,
            self.crlb,
            self.lambda,
            self.violations
        )
    }
}
