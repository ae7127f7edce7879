//! Numerical primitives shared by every other module: seedable random
//! streams, a small dense complex matrix, uniform-linear-array steering
//! vectors, the DFT codebook and the raised-cosine pulse.

mod array;
mod matrix;
mod pulse;
mod rng;

pub use array::{codeword_sin_angle, dft_codebook, steering_derivative, steering_vector, Codebook};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64 as C64;
pub use pulse::{raised_cosine, PulseShape};
pub use rng::SimRng;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// `⌈log2 n⌉`, with `ceil_log2(1) == 0`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1, "ceil_log2 of zero");
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Power in watts of a level given in dBm.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}
