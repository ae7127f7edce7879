use serde::{Deserialize, Serialize};

/// Lagrange multiplier of the cost constraint; never negative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualVariable {
    lambda: f64,
    pub step: f64,
}

impl DualVariable {
    pub fn new(step: f64) -> Self {
        Self { lambda: 0.0, step }
    }

    /// Starts from `lambda` clamped at zero.
    pub fn with_lambda(lambda: f64, step: f64) -> Self {
        Self {
            lambda: lambda.max(0.0),
            step,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Projected ascent `λ ← max(λ + κ · violation, 0)`, where `violation`
    /// is the batch mean of `Q_C − Γ_c`.
    pub fn update(&mut self, violation: f64) -> f64 {
        let next = self.lambda + self.step * violation;
        // `max` drops a NaN operand, keeping λ a number.
        self.lambda = next.max(0.0);
        self.lambda
    }
}
