use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Raised-cosine impulse response at `x` sample periods.
///
/// The factor `cos(π r x) / (1 - (2 r x)²)` is evaluated as
/// `sin(π e / 2) / (e (1 + u))` with `u = 2 r |x|`, `e = 1 - u`, which stays
/// accurate next to the removable singularity at `|x| = 1 / (2r)` where it
/// takes the limit value `π/4`.
pub fn raised_cosine(x: f64, rolloff: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&rolloff));
    let u = 2.0 * rolloff * x.abs();
    let e = 1.0 - u;
    let shaping = if e.abs() < 1e-12 {
        PI / 4.0
    } else {
        (PI * e / 2.0).sin() / (e * (1.0 + u))
    };
    sinc(x) * shaping
}

/// Truncated raised-cosine pulse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseShape {
    pub rolloff: f64,
    pub truncation_halfwidth: usize,
}

impl Default for PulseShape {
    fn default() -> Self {
        Self {
            rolloff: 0.4,
            truncation_halfwidth: 4,
        }
    }
}

impl PulseShape {
    pub fn eval(&self, x: f64) -> f64 {
        if x.abs() > self.truncation_halfwidth as f64 {
            0.0
        } else {
            raised_cosine(x, self.rolloff)
        }
    }
}
