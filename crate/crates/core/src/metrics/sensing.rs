use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::{KinematicEntity, ScenarioConfig};
use crate::error::{dim_mismatch, IsacError, Result};
use crate::math::{steering_derivative, steering_vector, ComplexMatrix, SimRng, C64};

/// Sensing target: position and motion plus one reflection coefficient per
/// subcarrier, redrawn every subframe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    pub entity: KinematicEntity,
    pub alpha: Vec<C64>,
}

impl TargetState {
    pub fn sample(cfg: &ScenarioConfig, rng: &mut SimRng) -> Self {
        let entity = KinematicEntity::sample(cfg, rng);
        let alpha = draw_alpha(cfg, entity.range, rng);
        Self { entity, alpha }
    }

    pub fn theta(&self) -> f64 {
        self.entity.angle
    }

    pub fn range(&self) -> f64 {
        self.entity.range
    }

    pub fn redraw_alpha(&mut self, cfg: &ScenarioConfig, rng: &mut SimRng) {
        self.alpha = draw_alpha(cfg, self.entity.range, rng);
    }
}

/// `|α_m|` in dB: `5 log10 σ_RCS − 10 log10 f_m[GHz] − 20 log10 d + 110`, with
/// the range clamped to at least 1 m.
pub fn reflection_amplitude_db(cfg: &ScenarioConfig, m: usize, range: f64) -> f64 {
    let f_ghz = cfg.subcarrier_hz(m) / 1e9;
    5.0 * cfg.rcs.log10() - 10.0 * f_ghz.log10() - 20.0 * range.max(1.0).log10() + 110.0
}

/// One coefficient per subcarrier; amplitude from the dB law, phase uniform.
pub fn draw_alpha(cfg: &ScenarioConfig, range: f64, rng: &mut SimRng) -> Vec<C64> {
    (0..cfg.subcarriers)
        .map(|m| {
            let amp = 10f64.powf(reflection_amplitude_db(cfg, m, range) / 20.0);
            C64::from_polar(amp, rng.uniform(0.0, 2.0 * PI))
        })
        .collect()
}

/// Unit-power i.i.d. CN(0, 1) data symbols, indexed `[l][m][u]`.
pub fn unit_symbols(users: usize, cfg: &ScenarioConfig, rng: &mut SimRng) -> Vec<Vec<Vec<C64>>> {
    (0..cfg.symbols_per_subframe)
        .map(|_| {
            (0..cfg.subcarriers)
                .map(|_| (0..users).map(|_| rng.complex_normal(1.0)).collect())
                .collect()
        })
        .collect()
}

/// Monostatic echo `y_m = α_m a_r a_tᴴ x_m + z` with
/// `x_m = √(P_t/(N_t U M)) F s_m` and `z ~ CN(0, σ_z² I)`.
///
/// Returns one `N_r × M` matrix per symbol of `symbols` (indexed `[l][m][u]`).
pub fn simulate_echo(
    precoder: &ComplexMatrix,
    target: &TargetState,
    symbols: &[Vec<Vec<C64>>],
    rng: &mut SimRng,
    cfg: &ScenarioConfig,
) -> Result<Vec<ComplexMatrix>> {
    let n_t = cfg.tx_antennas;
    let n_r = cfg.rx_antennas;
    let n_m = cfg.subcarriers;
    if precoder.rows() != n_t || target.alpha.len() != n_m {
        return Err(dim_mismatch(
            "simulate_echo",
            (n_t, n_m),
            (precoder.rows(), target.alpha.len()),
        ));
    }
    let scale = cfg.symbol_power_scale().sqrt();
    let a_t = steering_vector(target.theta(), n_t);
    let a_r = steering_vector(target.theta(), n_r);
    let mut out = Vec::with_capacity(symbols.len());
    for per_sc in symbols {
        if per_sc.len() != n_m {
            return Err(dim_mismatch("simulate_echo", n_m, per_sc.len()));
        }
        let mut y = ComplexMatrix::zeros(n_r, n_m);
        for (m, s) in per_sc.iter().enumerate() {
            let x = precoder.mul_vec(s)?;
            let proj: C64 = a_t.iter().zip(&x).map(|(a, xi)| a.conj() * xi).sum();
            let g = target.alpha[m] * proj * scale;
            for (i, ar) in a_r.iter().enumerate() {
                y[(i, m)] = ar * g + rng.complex_normal(cfg.radar_noise_w);
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// The `α`-independent trace terms of the angle Fisher information:
/// `Tr(ȦᴴȦR)`, `Tr(AᴴAR)` and `Tr(ȦᴴAR)` for `A = a_r a_tᴴ`, `R = c F Fᴴ`,
/// stored per unit `c` so that power enters only as a final factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FisherGeometry {
    pub dd: f64,
    pub aa: f64,
    pub da: C64,
    /// `c = P_t / (N_t U M)`.
    pub power_scale: f64,
    /// Cauchy–Schwarz upper bound of `aa`.
    aa_bound: f64,
}

impl FisherGeometry {
    /// `Tr(AᴴAR)` vanishes to rounding: the target lies in the precoder's null space.
    pub fn degenerate(&self) -> bool {
        !(self.aa > 1e-20 * self.aa_bound) || self.power_scale <= 0.0
    }
}

/// Per-subcarrier Fisher information with its degeneracy flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FisherInfo {
    pub value: f64,
    pub degenerate: bool,
}

/// Evaluates the trace terms column by column: `Tr(PᴴQR) = c Σ_u (P f_u)ᴴ (Q f_u)`.
pub fn fisher_geometry(
    precoder: &ComplexMatrix,
    theta: f64,
    cfg: &ScenarioConfig,
) -> Result<FisherGeometry> {
    let n_t = cfg.tx_antennas;
    if precoder.rows() != n_t {
        return Err(dim_mismatch("fisher_geometry", n_t, precoder.rows()));
    }
    let a_t = steering_vector(theta, n_t);
    let da_t = steering_derivative(theta, n_t);
    let a_r = steering_vector(theta, cfg.rx_antennas);
    let da_r = steering_derivative(theta, cfg.rx_antennas);
    let norm = |v: &[C64]| v.iter().map(C64::norm_sqr).sum::<f64>();
    let inner = |u: &[C64], v: &[C64]| u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<C64>();
    let (ar2, dar2, dar_ar) = (norm(&a_r), norm(&da_r), inner(&da_r, &a_r));
    let mut geo = FisherGeometry {
        dd: 0.0,
        aa: 0.0,
        da: C64::new(0.0, 0.0),
        power_scale: cfg.symbol_power_scale(),
        aa_bound: 0.0,
    };
    for j in 0..precoder.cols() {
        let f = precoder.column(j);
        // A f = a_r p, Ȧ f = ȧ_r p + a_r q.
        let p = inner(&a_t, &f);
        let q = inner(&da_t, &f);
        geo.aa += ar2 * p.norm_sqr();
        geo.aa_bound += ar2 * norm(&a_t) * norm(&f);
        geo.dd += dar2 * p.norm_sqr() + ar2 * q.norm_sqr() + 2.0 * (dar_ar * q * p.conj()).re;
        geo.da += (dar_ar * p.conj() + q.conj() * ar2) * p;
    }
    Ok(geo)
}

fn fisher_from_geometry(geo: &FisherGeometry, alpha: C64, cfg: &ScenarioConfig) -> FisherInfo {
    if geo.degenerate() {
        return FisherInfo {
            value: 0.0,
            degenerate: true,
        };
    }
    let num = (geo.dd * geo.aa - geo.da.norm_sqr()).max(0.0);
    FisherInfo {
        value: 2.0 * alpha.norm_sqr() * (num / geo.aa) * (geo.power_scale / cfg.radar_noise_w),
        degenerate: false,
    }
}

/// `J_m = 2|α_m|² (Tr(ȦᴴȦR) Tr(AᴴAR) − |Tr(ȦᴴAR)|²) / (σ_z² Tr(AᴴAR))`.
pub fn fisher_subcarrier(
    precoder: &ComplexMatrix,
    theta: f64,
    alpha: C64,
    cfg: &ScenarioConfig,
) -> Result<FisherInfo> {
    Ok(fisher_from_geometry(
        &fisher_geometry(precoder, theta, cfg)?,
        alpha,
        cfg,
    ))
}

/// Angle CRLB of one subframe with its per-subcarrier Fisher terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Crlb {
    /// `1 / Σ_m J_m`; `+∞` when degenerate.
    pub value: f64,
    pub fisher: Vec<f64>,
    pub degenerate: bool,
}

pub fn crlb(precoder: &ComplexMatrix, target: &TargetState, cfg: &ScenarioConfig) -> Result<Crlb> {
    let geo = fisher_geometry(precoder, target.theta(), cfg)?;
    let fisher: Vec<f64> = target
        .alpha
        .iter()
        .map(|a| fisher_from_geometry(&geo, *a, cfg).value)
        .collect();
    let total: f64 = fisher.iter().sum();
    let degenerate = !(total > 0.0);
    Ok(Crlb {
        value: if degenerate {
            f64::INFINITY
        } else {
            1.0 / total
        },
        fisher,
        degenerate,
    })
}

/// Mean CRLB over `draws` independent reflection-coefficient draws.
pub fn crlb_monte_carlo(
    precoder: &ComplexMatrix,
    target: &TargetState,
    draws: usize,
    rng: &mut SimRng,
    cfg: &ScenarioConfig,
) -> Result<f64> {
    let mut t = target.clone();
    let mut values = Vec::with_capacity(draws);
    for _ in 0..draws {
        t.redraw_alpha(cfg, rng);
        values.push(crlb(precoder, &t, cfg)?.value);
    }
    averaged_crlb(&values)
}

/// Arithmetic mean of per-subframe CRLBs; `+∞` propagates.
pub fn averaged_crlb(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(IsacError::EmptyInput("averaged_crlb"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}
