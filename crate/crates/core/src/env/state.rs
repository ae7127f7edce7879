use std::sync::Arc;

use ndarray::{Array2, Array3, Axis};

use crate::channel::ScenarioConfig;
use crate::error::{dim_mismatch, Result};
use crate::math::{codeword_sin_angle, steering_vector, ComplexMatrix};

/// Number of past position spectra kept in the observation.
pub const SPECTRUM_HISTORY: usize = 3;

/// Cell codes of the angle-range spectrum.
pub const CELL_EMPTY: u8 = 0;
pub const CELL_USER: u8 = 1;
pub const CELL_TARGET: u8 = 2;

/// CMDP observation.
///
/// `channel` is the `N_d × U_max × G_t` beamspace magnitude tensor, frozen
/// for the whole frame. `spectra` holds the three most recent angle-range
/// spectra, oldest first. Both are shared, so cloning a state is cheap.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvState {
    pub channel: Arc<Array3<f64>>,
    pub spectra: [Arc<Array2<u8>>; SPECTRUM_HISTORY],
}

impl EnvState {
    /// `s_p` as a dense `3 × N_x × N_y` tensor.
    pub fn position_tensor(&self) -> Array3<f64> {
        let views: Vec<_> = self.spectra.iter().map(|s| s.mapv(f64::from)).collect();
        ndarray::stack(Axis(0), &views.iter().map(|v| v.view()).collect::<Vec<_>>())
            .expect("spectra share a shape")
    }

    /// Next state: same channel tensor, spectra shifted left with `latest` appended.
    pub fn shifted(&self, latest: Array2<u8>) -> Self {
        Self {
            channel: Arc::clone(&self.channel),
            spectra: [
                Arc::clone(&self.spectra[1]),
                Arc::clone(&self.spectra[2]),
                Arc::new(latest),
            ],
        }
    }
}

/// Beamspace dictionary `N_t × G_t`: column `g` is the conjugate steering
/// vector on the sin-angle grid `-1 + 2g/G_t`, so a row `a_t(θ)ᵀ` of the tap
/// channel projects onto `a(φ_g)ᴴ a_t(θ)`.
pub fn angular_dictionary(cfg: &ScenarioConfig) -> ComplexMatrix {
    let g_t = cfg.dictionary_size;
    let columns: Vec<_> = (0..g_t)
        .map(|g| {
            steering_vector(codeword_sin_angle(g, g_t).asin(), cfg.tx_antennas)
                .into_iter()
                .map(|z| z.conj())
                .collect()
        })
        .collect();
    ComplexMatrix::from_columns(&columns).expect("dictionary columns share a length")
}

/// `|Ĥ_d D_t|` per tap, each `U × G_t` product written into rows `0..U` of a
/// zero `N_d × U_max × G_t` tensor.
pub fn build_channel_state(
    taps: &[ComplexMatrix],
    dictionary: &ComplexMatrix,
    cfg: &ScenarioConfig,
) -> Result<Array3<f64>> {
    let (n_d, u_max, g_t) = (cfg.taps, cfg.max_users, dictionary.cols());
    if taps.len() != n_d {
        return Err(dim_mismatch("build_channel_state", n_d, taps.len()));
    }
    let mut out = Array3::zeros((n_d, u_max, g_t));
    for (d, h) in taps.iter().enumerate() {
        if h.rows() > u_max || h.cols() != dictionary.rows() {
            return Err(dim_mismatch(
                "build_channel_state",
                (u_max, dictionary.rows()),
                h.shape(),
            ));
        }
        let proj = h.matmul(dictionary)?;
        for u in 0..proj.rows() {
            for g in 0..g_t {
                out[[d, u, g]] = proj[(u, g)].norm();
            }
        }
    }
    Ok(out)
}

/// Grid cell of a polar position: `θ_{n} = θ_min + n (θ_max − θ_min)/N_x`,
/// likewise for range. Out-of-range positions are clamped to the border cell.
pub fn grid_cell(angle: f64, range: f64, cfg: &ScenarioConfig) -> (usize, usize) {
    let bin = |v: f64, lo: f64, hi: f64, n: usize, name: &str| {
        let x = ((v - lo) / (hi - lo) * n as f64).floor();
        if !(0.0..n as f64).contains(&x) {
            log::warn!("{name} {v} outside [{lo}, {hi}); clamped to the grid border");
        }
        x.clamp(0.0, (n - 1) as f64) as usize
    };
    (
        bin(
            angle,
            cfg.angle_min,
            cfg.angle_max,
            cfg.grid_angle_bins,
            "angle",
        ),
        bin(
            range,
            cfg.range_min,
            cfg.range_max,
            cfg.grid_range_bins,
            "range",
        ),
    )
}

/// Angle-range spectrum: `1` in cells holding a user, `2` in cells holding a
/// target (targets override users), `0` elsewhere.
pub fn build_position_spectrum(
    users: &[(f64, f64)],
    targets: &[(f64, f64)],
    cfg: &ScenarioConfig,
) -> Array2<u8> {
    let mut p = Array2::from_elem((cfg.grid_angle_bins, cfg.grid_range_bins), CELL_EMPTY);
    for &(a, r) in users {
        let (x, y) = grid_cell(a, r, cfg);
        if p[[x, y]] == CELL_EMPTY {
            p[[x, y]] = CELL_USER;
        }
    }
    for &(a, r) in targets {
        let (x, y) = grid_cell(a, r, cfg);
        p[[x, y]] = CELL_TARGET;
    }
    p
}
