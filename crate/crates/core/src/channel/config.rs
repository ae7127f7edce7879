use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::math::{ceil_log2, db_to_linear, dbm_to_watts, linear_to_db, PulseShape};

/// Physical and system constants of one scenario.
///
/// Defaults are the full-scale values (32 antennas, 32 subcarriers, 28 GHz
/// carrier at 30 kHz spacing, ...). [`ScenarioConfig::tiny`] is the
/// desk-scale profile used by the learning experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    pub subcarriers: usize,
    pub cp_len: usize,
    pub symbols_per_subframe: usize,
    pub subframes: usize,
    pub users: usize,
    pub max_users: usize,
    pub taps: usize,
    pub paths_per_user: usize,
    pub codebook_size: usize,
    pub dictionary_size: usize,
    pub carrier_hz: f64,
    pub subcarrier_spacing_hz: f64,
    pub tx_power_w: f64,
    pub comm_noise_w: f64,
    pub radar_noise_w: f64,
    pub gain_std: f64,
    pub rcs: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    pub angle_min: f64,
    pub angle_max: f64,
    pub range_min: f64,
    pub range_max: f64,
    pub grid_angle_bins: usize,
    pub grid_range_bins: usize,
    /// Linear SINR threshold τ.
    pub sinr_threshold: f64,
    pub pulse: PulseShape,
    /// Std of the complex Gaussian error on the frame-start tap estimates.
    pub csi_error_std: f64,
    /// Std (in grid cells) of the idealized detector's position jitter.
    pub position_noise_std: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let noise = dbm_to_watts(-10.0);
        Self {
            tx_antennas: 32,
            rx_antennas: 32,
            subcarriers: 32,
            cp_len: 8,
            symbols_per_subframe: 32,
            subframes: 100,
            users: 4,
            max_users: 16,
            taps: 8,
            paths_per_user: 4,
            codebook_size: 32,
            dictionary_size: 64,
            carrier_hz: 28e9,
            subcarrier_spacing_hz: 30e3,
            tx_power_w: noise * db_to_linear(20.0),
            comm_noise_w: noise,
            radar_noise_w: noise,
            gain_std: 1.0,
            rcs: 10.0,
            speed_min: 10.0,
            speed_max: 30.0,
            angle_min: -PI,
            angle_max: PI,
            range_min: 0.0,
            range_max: 50.0,
            grid_angle_bins: 64,
            grid_range_bins: 50,
            sinr_threshold: 2.0,
            pulse: PulseShape::default(),
            csi_error_std: 0.0,
            position_noise_std: 0.0,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    /// Desk-scale scenario: 8 antennas, 4 subcarriers, 2 users, 8 codewords,
    /// 20 subframes per frame.
    pub fn tiny() -> Self {
        Self {
            tx_antennas: 8,
            rx_antennas: 8,
            subcarriers: 4,
            cp_len: 2,
            symbols_per_subframe: 4,
            subframes: 20,
            users: 2,
            max_users: 2,
            taps: 3,
            paths_per_user: 2,
            codebook_size: 8,
            dictionary_size: 16,
            grid_angle_bins: 16,
            grid_range_bins: 8,
            ..Self::default()
        }
    }

    /// Symbol period `1/Δf`; the Doppler phase advances by ω per symbol period.
    pub fn symbol_period(&self) -> f64 {
        1.0 / self.subcarrier_spacing_hz
    }

    /// Time-domain sample period `1/(M Δf)`; delay taps are spaced by it.
    pub fn sample_period(&self) -> f64 {
        1.0 / (self.subcarriers as f64 * self.subcarrier_spacing_hz)
    }

    /// Samples per OFDM symbol including the cyclic prefix.
    pub fn samples_per_symbol(&self) -> usize {
        self.subcarriers + self.cp_len
    }

    pub fn subframe_duration(&self) -> f64 {
        (self.symbols_per_subframe * self.samples_per_symbol()) as f64 * self.sample_period()
    }

    pub fn user_bits(&self) -> usize {
        ceil_log2(self.max_users)
    }

    pub fn code_bits(&self) -> usize {
        ceil_log2(self.codebook_size)
    }

    /// Length of the action vector.
    pub fn action_bits(&self) -> usize {
        self.user_bits() + self.code_bits()
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.tx_power_w / self.comm_noise_w)
    }

    pub fn set_snr_db(&mut self, snr_db: f64) {
        self.tx_power_w = self.comm_noise_w * db_to_linear(snr_db);
    }

    /// Noise term `N_t U M σ_c² / P_t` of the SINR denominator.
    pub fn sinr_noise_term(&self) -> f64 {
        (self.tx_antennas * self.users * self.subcarriers) as f64 * self.comm_noise_w
            / self.tx_power_w
    }

    /// Power scale `P_t / (N_t U M)` of the transmitted symbols.
    pub fn symbol_power_scale(&self) -> f64 {
        self.tx_power_w / (self.tx_antennas * self.users * self.subcarriers) as f64
    }

    /// Frequency of subcarrier `m` in Hz, centred on the carrier.
    pub fn subcarrier_hz(&self, m: usize) -> f64 {
        self.carrier_hz + (m as f64 - self.subcarriers as f64 / 2.0) * self.subcarrier_spacing_hz
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tx_antennas", self.tx_antennas),
            ("rx_antennas", self.rx_antennas),
            ("subcarriers", self.subcarriers),
            ("symbols_per_subframe", self.symbols_per_subframe),
            ("subframes", self.subframes),
            ("users", self.users),
            ("max_users", self.max_users),
            ("taps", self.taps),
            ("paths_per_user", self.paths_per_user),
            ("codebook_size", self.codebook_size),
            ("dictionary_size", self.dictionary_size),
            ("grid_angle_bins", self.grid_angle_bins),
            ("grid_range_bins", self.grid_range_bins),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(invalid(format!("scenario.{name}"), "must be at least 1"));
            }
        }
        if self.users > self.max_users {
            return Err(invalid(
                "scenario.users",
                format!("{} users exceed max_users = {}", self.users, self.max_users),
            ));
        }
        if self.taps > self.cp_len + 1 {
            return Err(invalid(
                "scenario.taps",
                format!(
                    "{} taps need a cyclic prefix of at least {} samples",
                    self.taps,
                    self.taps - 1
                ),
            ));
        }
        if self.taps > self.subcarriers {
            return Err(invalid(
                "scenario.taps",
                "must not exceed the subcarrier count",
            ));
        }
        let positive_reals = [
            ("carrier_hz", self.carrier_hz),
            ("subcarrier_spacing_hz", self.subcarrier_spacing_hz),
            ("tx_power_w", self.tx_power_w),
            ("comm_noise_w", self.comm_noise_w),
            ("radar_noise_w", self.radar_noise_w),
            ("rcs", self.rcs),
            ("sinr_threshold", self.sinr_threshold),
        ];
        for (name, v) in positive_reals {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(
                    format!("scenario.{name}"),
                    "must be finite and positive",
                ));
            }
        }
        if !(self.gain_std >= 0.0) {
            return Err(invalid("scenario.gain_std", "must be nonnegative"));
        }
        if !(0.0 <= self.speed_min && self.speed_min <= self.speed_max) {
            return Err(invalid(
                "scenario.speed_min",
                "need 0 <= speed_min <= speed_max",
            ));
        }
        if !(self.angle_min < self.angle_max) {
            return Err(invalid("scenario.angle_min", "need angle_min < angle_max"));
        }
        if !(0.0 <= self.range_min && self.range_min < self.range_max) {
            return Err(invalid(
                "scenario.range_min",
                "need 0 <= range_min < range_max",
            ));
        }
        if !(0.0..=1.0).contains(&self.pulse.rolloff) {
            return Err(invalid("scenario.pulse.rolloff", "must lie in [0, 1]"));
        }
        if self.csi_error_std < 0.0 || self.position_noise_std < 0.0 {
            return Err(invalid(
                "scenario.csi_error_std",
                "noise levels must be nonnegative",
            ));
        }
        Ok(())
    }

    /// True when the sensing range covers the full circle, so angles wrap.
    pub(crate) fn angle_wraps(&self) -> bool {
        (self.angle_max - self.angle_min - 2.0 * PI).abs() < 1e-12
    }
}
