use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, FreqBlocks, PrecodedBlocks, ScenarioConfig};
use crate::error::{dim_mismatch, Result};
use crate::math::ComplexMatrix;

/// SINR of user `u` on subcarrier `m` from precoded gains.
///
/// Denominator: ICI `Σ_{k≠m} Σ_{u'} |h_{m,k,u} f_{u'}|²`, IUI
/// `Σ_{i≠u} |h_{m,m,u} f_i|²` and the noise term `N_t U M σ_c² / P_t`.
pub fn sinr_precoded(gains: &PrecodedBlocks, u: usize, m: usize, noise_term: f64) -> f64 {
    let n_m = gains.subcarriers();
    let n_s = gains.streams();
    let signal = gains.gain(m, m, u, u).norm_sqr();
    let mut ici = 0.0;
    for k in (0..n_m).filter(|&k| k != m) {
        for s in 0..n_s {
            ici += gains.gain(m, k, u, s).norm_sqr();
        }
    }
    let iui: f64 = (0..n_s)
        .filter(|&i| i != u)
        .map(|i| gains.gain(m, m, u, i).norm_sqr())
        .sum();
    signal / (ici + iui + noise_term)
}

/// SINR of user `u` on subcarrier `m` given the frequency-domain blocks of one
/// symbol and the precoder matrix.
pub fn sinr(
    blocks: &FreqBlocks,
    precoder: &ComplexMatrix,
    u: usize,
    m: usize,
    cfg: &ScenarioConfig,
) -> Result<f64> {
    if precoder.rows() != blocks.antennas() || precoder.cols() != blocks.users() {
        return Err(dim_mismatch(
            "sinr",
            (blocks.antennas(), blocks.users()),
            precoder.shape(),
        ));
    }
    if u >= blocks.users() || m >= blocks.subcarriers() {
        return Err(dim_mismatch(
            "sinr",
            (blocks.users(), blocks.subcarriers()),
            (u, m),
        ));
    }
    let gains = blocks.precode(precoder)?;
    Ok(sinr_precoded(&gains, u, m, cfg.sinr_noise_term()))
}

/// Linear SINR for every (user, subcarrier, symbol) of a subframe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinrTable {
    users: usize,
    subcarriers: usize,
    symbols: usize,
    data: Vec<f64>,
}

impl SinrTable {
    pub fn from_fn(
        users: usize,
        subcarriers: usize,
        symbols: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(users * subcarriers * symbols);
        for u in 0..users {
            for m in 0..subcarriers {
                for l in 0..symbols {
                    data.push(f(u, m, l));
                }
            }
        }
        Self {
            users,
            subcarriers,
            symbols,
            data,
        }
    }

    pub fn get(&self, u: usize, m: usize, l: usize) -> f64 {
        self.data[(u * self.subcarriers + m) * self.symbols + l]
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.users, self.subcarriers, self.symbols)
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len().max(1) as f64
    }
}

/// SINR table of a subframe: blocks are recomputed for each of its symbols.
pub fn sinr_table(
    realization: &ChannelRealization,
    precoder: &ComplexMatrix,
    cfg: &ScenarioConfig,
) -> Result<SinrTable> {
    if precoder.cols() != realization.num_users() {
        return Err(dim_mismatch(
            "sinr_table",
            realization.num_users(),
            precoder.cols(),
        ));
    }
    let noise = cfg.sinr_noise_term();
    let (n_u, n_m, n_l) = (
        realization.num_users(),
        cfg.subcarriers,
        cfg.symbols_per_subframe,
    );
    let mut per_symbol = Vec::with_capacity(n_l);
    for l in 0..n_l {
        per_symbol.push(realization.precoded_blocks(l, precoder)?);
    }
    Ok(SinrTable::from_fn(n_u, n_m, n_l, |u, m, l| {
        sinr_precoded(&per_symbol[l], u, m, noise)
    }))
}

/// `Σ_{l,m,u} log2(1 + γ) / (L T_s M Δf)` in bits/s/Hz.
pub fn spectral_efficiency(table: &SinrTable, cfg: &ScenarioConfig) -> f64 {
    let (_, n_m, n_l) = table.shape();
    let total: f64 = table.values().iter().map(|g| (1.0 + g).log2()).sum();
    total / (n_l as f64 * cfg.symbol_period() * n_m as f64 * cfg.subcarrier_spacing_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_paths, ChannelRealization, PathParams};
    use crate::math::{Codebook, SimRng, C64};
    use crate::metrics::Precoder;

    #[test]
    fn uniform_sinr_closed_form() {
        let cfg = ScenarioConfig::default();
        for g0 in [0.0, 1.0, 2.5, 17.0] {
            let table = SinrTable::from_fn(
                cfg.users,
                cfg.subcarriers,
                cfg.symbols_per_subframe,
                |_, _, _| g0,
            );
            let se = spectral_efficiency(&table, &cfg);
            let expected = cfg.users as f64 * (1.0 + g0).log2();
            assert!(
                (se - expected).abs() <= 1e-12 * expected.max(1.0),
                "{se} vs {expected}"
            );
        }
    }

    #[test]
    fn zero_channel_zero_sinr() {
        let cfg = ScenarioConfig {
            gain_std: 0.0,
            ..ScenarioConfig::tiny()
        };
        let mut rng = SimRng::new(1);
        let users: Vec<Vec<PathParams>> = (0..cfg.users)
            .map(|_| sample_paths(&cfg, &mut rng))
            .collect();
        let real = ChannelRealization::new(&cfg, users);
        let cb = Codebook::new(cfg.tx_antennas, cfg.codebook_size);
        let f = Precoder::random(&cb, cfg.users, &mut rng);
        let table = sinr_table(&real, f.matrix(), &cfg).unwrap();
        assert!(table.values().iter().all(|&g| g == 0.0));
        assert_eq!(spectral_efficiency(&table, &cfg), 0.0);
        let blocks = real.freq_channel_blocks(0);
        assert_eq!(sinr(&blocks, f.matrix(), 0, 0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn noise_only_unit_sinr() {
        // One user, one subcarrier, one antenna: |h f|² = 1 and P_t = N_t σ².
        let cfg = ScenarioConfig {
            tx_antennas: 1,
            subcarriers: 1,
            users: 1,
            max_users: 1,
            taps: 1,
            cp_len: 0,
            paths_per_user: 1,
            comm_noise_w: 0.25,
            tx_power_w: 0.25,
            ..ScenarioConfig::tiny()
        };
        let mut path = sample_paths(&cfg, &mut SimRng::new(3))[0];
        path.beta = C64::new(1.0, 0.0);
        path.tau = 0.0;
        path.doppler_omega = 0.0;
        let real = ChannelRealization::new(&cfg, vec![vec![path]]);
        let f = ComplexMatrix::from_row_major(1, 1, vec![C64::new(1.0, 0.0)]).unwrap();
        let blocks = real.freq_channel_blocks(0);
        assert!((blocks.block(0, 0)[(0, 0)].norm() - 1.0).abs() < 1e-12);
        let g = sinr(&blocks, &f, 0, 0, &cfg).unwrap();
        assert!((g - 1.0).abs() < 1e-12, "{g}");
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let cfg = ScenarioConfig::tiny();
        let mut rng = SimRng::new(1);
        let users: Vec<Vec<PathParams>> = (0..cfg.users)
            .map(|_| sample_paths(&cfg, &mut rng))
            .collect();
        let real = ChannelRealization::new(&cfg, users);
        let blocks = real.freq_channel_blocks(0);
        let wrong = ComplexMatrix::zeros(cfg.tx_antennas + 1, cfg.users);
        assert!(sinr(&blocks, &wrong, 0, 0, &cfg).is_err());
        let f = ComplexMatrix::zeros(cfg.tx_antennas, cfg.users);
        assert!(sinr(&blocks, &f, cfg.users, 0, &cfg).is_err());
    }
}
