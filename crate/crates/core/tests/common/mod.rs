//! Reference oracles shared by the integration tests: brute-force
//! time-domain OFDM, a finite-difference Fisher information and gradient checks.
#![allow(dead_code)]

pub mod gradcheck;

use std::f64::consts::PI;

use isac_core::agent::{batch_input, AgentBundle, Transition};
use isac_core::channel::{sample_paths, ChannelRealization, PathParams};
use isac_core::env::{ActionCode, EnvState, IsacEnv};
use isac_core::math::{steering_vector, ComplexMatrix, SimRng, C64};
use isac_core::neural::NetInput;
use isac_core::ScenarioConfig;
use ndarray::Array2;

pub fn random_realization(cfg: &ScenarioConfig, seed: u64) -> ChannelRealization {
    let mut rng = SimRng::new(seed);
    let users: Vec<Vec<PathParams>> = (0..cfg.users)
        .map(|_| sample_paths(cfg, &mut rng))
        .collect();
    ChannelRealization::new(cfg, users)
}

/// Sends frequency-domain vectors `x[k]` (length `N_t` each) through symbol
/// `l`: unnormalised IDFT, cyclic prefix, time-varying tap convolution
/// evaluated at the receive instant, CP removal, DFT scaled by `1/M`.
/// Returns the `U`-vector received on every subcarrier.
pub fn time_domain_ofdm(real: &ChannelRealization, l: usize, x: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let cfg = real.config();
    let m = cfg.subcarriers;
    let cp = cfg.cp_len;
    let n_t = cfg.tx_antennas;
    let n_u = real.num_users();
    let body: Vec<Vec<C64>> = (0..m)
        .map(|n| {
            (0..n_t)
                .map(|i| {
                    (0..m)
                        .map(|k| {
                            x[k][i] * C64::from_polar(1.0, 2.0 * PI * (k * n) as f64 / m as f64)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    let tx: Vec<&Vec<C64>> = (0..m + cp).map(|t| &body[(t + m - cp % m) % m]).collect();
    let start = l * cfg.samples_per_symbol();
    let rx: Vec<Vec<C64>> = (cp..m + cp)
        .map(|t| {
            let mut r = vec![C64::new(0.0, 0.0); n_u];
            for d in 0..cfg.taps {
                let h = real.tap_response(d, start + t).transpose();
                let s = h.mul_vec(tx[t - d]).unwrap();
                for (acc, v) in r.iter_mut().zip(s) {
                    *acc += v;
                }
            }
            r
        })
        .collect();
    (0..m)
        .map(|mm| {
            (0..n_u)
                .map(|u| {
                    rx.iter()
                        .enumerate()
                        .map(|(n, r)| {
                            r[u] * C64::from_polar(1.0, -2.0 * PI * (mm * n) as f64 / m as f64)
                        })
                        .sum::<C64>()
                        / m as f64
                })
                .collect()
        })
        .collect()
}

/// Stacked `H̄ F̄` of symbol `l` (`UM × UM`, row `(m, u)`, column `(k, u')`),
/// built column by column from unit impulses through [`time_domain_ofdm`].
pub fn stacked_precoded(real: &ChannelRealization, l: usize, f: &ComplexMatrix) -> ComplexMatrix {
    let cfg = real.config();
    let m = cfg.subcarriers;
    let n_u = f.cols();
    let mut out = ComplexMatrix::zeros(real.num_users() * m, n_u * m);
    for k in 0..m {
        for s in 0..n_u {
            let mut x = vec![vec![C64::new(0.0, 0.0); cfg.tx_antennas]; m];
            x[k] = f.column(s);
            let y = time_domain_ofdm(real, l, &x);
            for (mm, ym) in y.iter().enumerate() {
                for (u, v) in ym.iter().enumerate() {
                    out[(mm * real.num_users() + u, k * n_u + s)] = *v;
                }
            }
        }
    }
    out
}

/// SINR read off a row of the stacked product: diagonal entry over the rest
/// of the row plus noise.
pub fn stacked_sinr(p: &ComplexMatrix, n_u: usize, u: usize, m: usize, noise: f64) -> f64 {
    let row = m * n_u + u;
    let signal = p[(row, row)].norm_sqr();
    let interference: f64 = (0..p.cols())
        .filter(|&c| c != row)
        .map(|c| p[(row, c)].norm_sqr())
        .sum();
    signal / (interference + noise)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Same paths with every Doppler set to zero.
pub fn static_copy(real: &ChannelRealization) -> ChannelRealization {
    let users: Vec<Vec<PathParams>> = real
        .users()
        .iter()
        .map(|ps| {
            ps.iter()
                .map(|p| PathParams {
                    doppler_omega: 0.0,
                    ..*p
                })
                .collect()
        })
        .collect();
    ChannelRealization::new(real.config(), users)
}

/// Fisher information from explicit matrices `A(θ) = a_r a_tᴴ`, with `Ȧ`
/// replaced by a central difference of step `delta`.
pub fn fisher_finite_difference(
    f: &ComplexMatrix,
    theta: f64,
    alpha: C64,
    cfg: &ScenarioConfig,
    delta: f64,
) -> f64 {
    let a_of = |t: f64| {
        ComplexMatrix::outer(
            &steering_vector(t, cfg.rx_antennas),
            &steering_vector(t, cfg.tx_antennas),
        )
    };
    let a = a_of(theta);
    let da = a_of(theta + delta)
        .sub(&a_of(theta - delta))
        .unwrap()
        .scale(C64::new(0.5 / delta, 0.0));
    let r = f
        .matmul(&f.adjoint())
        .unwrap()
        .scale(C64::new(cfg.symbol_power_scale(), 0.0));
    let tr = |p: &ComplexMatrix, q: &ComplexMatrix| {
        p.adjoint()
            .matmul(q)
            .unwrap()
            .matmul(&r)
            .unwrap()
            .trace()
            .unwrap()
    };
    let (dd, aa, dad) = (tr(&da, &da).re, tr(&a, &a).re, tr(&da, &a));
    2.0 * alpha.norm_sqr() * (dd * aa - dad.norm_sqr()) / (cfg.radar_noise_w * aa)
}

/// Random-action rollout collecting `steps` transitions (episodes restart
/// as needed).
pub fn rollout(cfg: &ScenarioConfig, seed: u64, steps: usize) -> Vec<Transition> {
    let mut env = IsacEnv::new(cfg).unwrap();
    let mut rng = SimRng::new(seed);
    let mut state = env.reset(&mut rng).unwrap();
    let mut out = Vec::with_capacity(steps);
    while out.len() < steps {
        let code =
            ActionCode::from_indices(rng.index(cfg.users), rng.index(cfg.codebook_size), cfg);
        let step = env.step(&code).unwrap();
        out.push(Transition {
            state: state.clone(),
            action: code.raw,
            reward: step.reward,
            cost: step.cost,
            next_state: step.next_state.clone(),
            done: step.done,
        });
        state = if step.done {
            env.reset(&mut rng).unwrap()
        } else {
            step.next_state
        };
    }
    out
}

/// Scores every feasible (user, codeword) pair one at a time with
/// `Q_R − λ (Q_C − Γ_c)` and returns the first maximiser.
pub fn lagrangian_argmax(
    bundle: &AgentBundle,
    state: &EnvState,
    users: usize,
    lambda: f64,
) -> ActionCode {
    let cfg = &bundle.scenario;
    let mut best: Option<(f64, ActionCode)> = None;
    for u in 0..users {
        for c in 0..cfg.codebook_size {
            let code = ActionCode::from_indices(u, c, cfg);
            let input = NetInput {
                action: Some(
                    Array2::from_shape_vec((1, code.raw.len()), code.raw.clone()).unwrap(),
                ),
                ..batch_input(&[state], None).unwrap()
            };
            let qr = bundle.reward_critic.predict(&input).unwrap()[[0, 0]];
            let qc = bundle.cost_critic.predict(&input).unwrap()[[0, 0]];
            let score = qr - lambda * (qc - bundle.budget.gamma_c);
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, code));
            }
        }
    }
    best.expect("at least one feasible action").1
}
