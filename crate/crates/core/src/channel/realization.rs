use std::f64::consts::PI;

use super::{PathParams, ScenarioConfig};
use crate::error::{dim_mismatch, Result};
use crate::math::{steering_vector, ComplexMatrix, C64};

/// Frozen multipath state of all users for one subframe.
///
/// Sample indices count from the first cyclic-prefix sample of symbol 0 of
/// the subframe; the Doppler phase of a path advances by `ω / (M + L_cp)`
/// per sample, i.e. by `ω` per OFDM symbol.
#[derive(Clone, Debug)]
pub struct ChannelRealization {
    cfg: ScenarioConfig,
    users: Vec<Vec<PathParams>>,
    /// `√(N_t/P_u) β a_t(θ)` per user and path.
    spatial: Vec<Vec<Vec<C64>>>,
    /// Pulse weight of each path on each tap.
    tap_gains: Vec<Vec<Vec<f64>>>,
}

/// Grid of `U × N_t` blocks `H_m[k]`: the response seen on subcarrier `m` from
/// data sent on subcarrier `k`.
#[derive(Clone, Debug)]
pub struct FreqBlocks {
    subcarriers: usize,
    blocks: Vec<ComplexMatrix>,
}

/// `H_m[k] F` for every `(m, k)`: entry `(u, u')` is `h_{m,k,u} f_{u'}`.
#[derive(Clone, Debug)]
pub struct PrecodedBlocks {
    subcarriers: usize,
    users: usize,
    data: Vec<C64>,
}

impl ChannelRealization {
    pub fn new(cfg: &ScenarioConfig, users: Vec<Vec<PathParams>>) -> Self {
        let n_t = cfg.tx_antennas;
        let ts = cfg.sample_period();
        let spatial = users
            .iter()
            .map(|paths| {
                let amp = (n_t as f64 / paths.len().max(1) as f64).sqrt();
                paths
                    .iter()
                    .map(|p| {
                        steering_vector(p.theta(), n_t)
                            .into_iter()
                            .map(|a| a * p.beta * amp)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let tap_gains = users
            .iter()
            .map(|paths| {
                paths
                    .iter()
                    .map(|p| {
                        (0..cfg.taps)
                            .map(|d| cfg.pulse.eval(d as f64 - p.tau / ts))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            cfg: cfg.clone(),
            users,
            spatial,
            tap_gains,
        }
    }

    pub fn users(&self) -> &[Vec<PathParams>] {
        &self.users
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    fn sample_phase(&self, path: &PathParams, sample_index: usize) -> C64 {
        let per_sample = path.doppler_omega / self.cfg.samples_per_symbol() as f64;
        C64::from_polar(1.0, per_sample * sample_index as f64)
    }

    /// `N_t × U` matrix of tap `d` at time `sample_index`; column `u` is the
    /// sum over user `u`'s paths of `√(N_t/P_u) β g(d - τ/T) e^{jφ} a_t(θ)`.
    pub fn tap_response(&self, d: usize, sample_index: usize) -> ComplexMatrix {
        assert!(d < self.cfg.taps, "tap {d} out of range");
        let n_t = self.cfg.tx_antennas;
        let mut h = ComplexMatrix::zeros(n_t, self.users.len());
        for (u, paths) in self.users.iter().enumerate() {
            for (p, path) in paths.iter().enumerate() {
                let w = self.sample_phase(path, sample_index) * self.tap_gains[u][p][d];
                for (i, v) in self.spatial[u][p].iter().enumerate() {
                    h[(i, u)] += v * w;
                }
            }
        }
        h
    }

    /// Frame-start tap channels arranged `U × N_t` (transpose of
    /// [`tap_response`](Self::tap_response) at sample 0), one per tap.
    pub fn tap_snapshot(&self) -> Vec<ComplexMatrix> {
        (0..self.cfg.taps)
            .map(|d| self.tap_response(d, 0).transpose())
            .collect()
    }

    /// Absolute sample index of body sample `n` (after CP removal) of symbol `l`.
    pub fn body_sample_index(&self, l: usize, n: usize) -> usize {
        l * self.cfg.samples_per_symbol() + self.cfg.cp_len + n
    }

    /// Frequency response of a path's pulse weights at subcarrier `k`.
    fn path_freq(&self, u: usize, p: usize, k: usize) -> C64 {
        let m = self.cfg.subcarriers as f64;
        self.tap_gains[u][p]
            .iter()
            .enumerate()
            .map(|(d, g)| C64::from_polar(*g, -2.0 * PI * (k * d) as f64 / m))
            .sum()
    }

    /// `(1/M) Σ_n e^{j2πnq/M} e^{jφ(t_n)}` for `q = 0..M`: the spread of a
    /// path's Doppler across subcarrier offsets during symbol `l`.
    fn doppler_leakage(&self, path: &PathParams, l: usize) -> Vec<C64> {
        let m = self.cfg.subcarriers;
        let phases: Vec<C64> = (0..m)
            .map(|n| self.sample_phase(path, self.body_sample_index(l, n)))
            .collect();
        (0..m)
            .map(|q| {
                phases
                    .iter()
                    .enumerate()
                    .map(|(n, ph)| ph * C64::from_polar(1.0, 2.0 * PI * (n * q) as f64 / m as f64))
                    .sum::<C64>()
                    / m as f64
            })
            .collect()
    }

    /// `H_m[k] = (1/M) Σ_n e^{j2πn(k-m)/M} Σ_d H̃_d(t_n)ᵀ e^{-j2πkd/M}` for all
    /// `(m, k)` of symbol `l`, evaluated path by path.
    pub fn freq_channel_blocks(&self, l: usize) -> FreqBlocks {
        let m_count = self.cfg.subcarriers;
        let n_t = self.cfg.tx_antennas;
        let n_u = self.users.len();
        let mut blocks = vec![ComplexMatrix::zeros(n_u, n_t); m_count * m_count];
        for (u, paths) in self.users.iter().enumerate() {
            for (p, path) in paths.iter().enumerate() {
                let leak = self.doppler_leakage(path, l);
                for k in 0..m_count {
                    let g = self.path_freq(u, p, k);
                    for m in 0..m_count {
                        let w = g * leak[(k + m_count - m) % m_count];
                        let block = &mut blocks[m * m_count + k];
                        for (i, v) in self.spatial[u][p].iter().enumerate() {
                            block[(u, i)] += v * w;
                        }
                    }
                }
            }
        }
        FreqBlocks {
            subcarriers: m_count,
            blocks,
        }
    }

    /// Same blocks computed literally: tap matrices per body sample, a DFT
    /// over taps, then a DFT over time.
    pub fn freq_channel_blocks_direct(&self, l: usize) -> FreqBlocks {
        let m_count = self.cfg.subcarriers;
        let mf = m_count as f64;
        let taps: Vec<Vec<ComplexMatrix>> = (0..m_count)
            .map(|n| {
                let t = self.body_sample_index(l, n);
                (0..self.cfg.taps)
                    .map(|d| self.tap_response(d, t).transpose())
                    .collect()
            })
            .collect();
        let n_u = self.users.len();
        let n_t = self.cfg.tx_antennas;
        let mut blocks = Vec::with_capacity(m_count * m_count);
        for m in 0..m_count {
            for k in 0..m_count {
                let mut acc = ComplexMatrix::zeros(n_u, n_t);
                for (n, per_tap) in taps.iter().enumerate() {
                    let time_tw =
                        C64::from_polar(1.0, 2.0 * PI * n as f64 * (k as f64 - m as f64) / mf);
                    for (d, h) in per_tap.iter().enumerate() {
                        let freq_tw = C64::from_polar(1.0, -2.0 * PI * (k * d) as f64 / mf);
                        acc.add_assign_scaled(h, time_tw * freq_tw / mf)
                            .expect("tap shapes agree");
                    }
                }
                blocks.push(acc);
            }
        }
        FreqBlocks {
            subcarriers: m_count,
            blocks,
        }
    }

    /// `H_m[k] F` for symbol `l` without materialising the `U × N_t` blocks.
    pub fn precoded_blocks(&self, l: usize, precoder: &ComplexMatrix) -> Result<PrecodedBlocks> {
        let n_t = self.cfg.tx_antennas;
        if precoder.rows() != n_t {
            return Err(dim_mismatch(
                "ChannelRealization::precoded_blocks",
                n_t,
                precoder.rows(),
            ));
        }
        let m_count = self.cfg.subcarriers;
        let n_u = self.users.len();
        let n_s = precoder.cols();
        let mut data = vec![C64::new(0.0, 0.0); m_count * m_count * n_u * n_s];
        let columns: Vec<Vec<C64>> = (0..n_s).map(|j| precoder.column(j)).collect();
        for (u, paths) in self.users.iter().enumerate() {
            for (p, path) in paths.iter().enumerate() {
                let proj: Vec<C64> = columns
                    .iter()
                    .map(|f| self.spatial[u][p].iter().zip(f).map(|(a, b)| a * b).sum())
                    .collect();
                let leak = self.doppler_leakage(path, l);
                for k in 0..m_count {
                    let g = self.path_freq(u, p, k);
                    for m in 0..m_count {
                        let w = g * leak[(k + m_count - m) % m_count];
                        let base = ((m * m_count + k) * n_u + u) * n_s;
                        for (j, s) in proj.iter().enumerate() {
                            data[base + j] += w * s;
                        }
                    }
                }
            }
        }
        Ok(PrecodedBlocks {
            subcarriers: m_count,
            users: n_u,
            data,
        })
    }
}

impl FreqBlocks {
    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    /// Block `H_m[k]` (receive subcarrier `m`, transmit subcarrier `k`).
    pub fn block(&self, m: usize, k: usize) -> &ComplexMatrix {
        &self.blocks[m * self.subcarriers + k]
    }

    pub fn users(&self) -> usize {
        self.blocks.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn antennas(&self) -> usize {
        self.blocks.first().map_or(0, ComplexMatrix::cols)
    }

    pub fn precode(&self, precoder: &ComplexMatrix) -> Result<PrecodedBlocks> {
        let n_u = self.users();
        let n_s = precoder.cols();
        let mut data = Vec::with_capacity(self.blocks.len() * n_u * n_s);
        for b in &self.blocks {
            let g = b.matmul(precoder)?;
            data.extend_from_slice(g.as_slice());
        }
        Ok(PrecodedBlocks {
            subcarriers: self.subcarriers,
            users: n_u,
            data,
        })
    }

    /// Sum of squared Frobenius norms of the off-diagonal (`k ≠ m`) blocks
    /// and of the diagonal blocks.
    pub fn ici_and_diagonal_mass(&self) -> (f64, f64) {
        let mut off = 0.0;
        let mut diag = 0.0;
        for m in 0..self.subcarriers {
            for k in 0..self.subcarriers {
                let e = self.block(m, k).frobenius_norm_sqr();
                if m == k {
                    diag += e;
                } else {
                    off += e;
                }
            }
        }
        (off, diag)
    }

    pub fn total_energy(&self) -> f64 {
        self.blocks
            .iter()
            .map(ComplexMatrix::frobenius_norm_sqr)
            .sum()
    }
}

impl PrecodedBlocks {
    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn streams(&self) -> usize {
        self.data.len() / (self.subcarriers * self.subcarriers * self.users.max(1))
    }

    /// `h_{m,k,u} f_{stream}`.
    pub fn gain(&self, m: usize, k: usize, u: usize, stream: usize) -> C64 {
        let n_s = self.streams();
        self.data[((m * self.subcarriers + k) * self.users + u) * n_s + stream]
    }
}
