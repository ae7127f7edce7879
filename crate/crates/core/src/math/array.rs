use std::f64::consts::PI;

use super::C64;

/// Transmit/receive response of an `n`-element half-wavelength ULA:
/// element `i` is `e^{-j i π sin θ} / √n`.
pub fn steering_vector(theta: f64, n: usize) -> Vec<C64> {
    let scale = 1.0 / (n as f64).sqrt();
    let s = theta.sin();
    (0..n)
        .map(|i| C64::from_polar(scale, -(i as f64) * PI * s))
        .collect()
}

/// Analytic `∂a(θ)/∂θ` of [`steering_vector`].
pub fn steering_derivative(theta: f64, n: usize) -> Vec<C64> {
    let scale = 1.0 / (n as f64).sqrt();
    let (s, c) = theta.sin_cos();
    (0..n)
        .map(|i| {
            let phase = -(i as f64) * PI * s;
            C64::new(0.0, -(i as f64) * PI * c) * C64::from_polar(scale, phase)
        })
        .collect()
}

/// `sin θ` of codeword `index` in an `n_b`-entry codebook. The grid is
/// edge-aligned on `[-1, 1)`.
pub fn codeword_sin_angle(index: usize, n_b: usize) -> f64 {
    -1.0 + 2.0 * index as f64 / n_b as f64
}

/// `n_b` constant-modulus beams: steering vectors on the sin-angle grid,
/// scaled so every entry has unit modulus and element 0 equals 1.
pub fn dft_codebook(n_t: usize, n_b: usize) -> Vec<Vec<C64>> {
    (0..n_b)
        .map(|b| {
            let s = codeword_sin_angle(b, n_b);
            (0..n_t)
                .map(|i| C64::from_polar(1.0, -(i as f64) * PI * s))
                .collect()
        })
        .collect()
}

/// DFT codebook with its angular grid.
#[derive(Clone, Debug)]
pub struct Codebook {
    n_t: usize,
    words: Vec<Vec<C64>>,
}

impl Codebook {
    pub fn new(n_t: usize, n_b: usize) -> Self {
        Self {
            n_t,
            words: dft_codebook(n_t, n_b),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn antennas(&self) -> usize {
        self.n_t
    }

    pub fn word(&self, index: usize) -> &[C64] {
        &self.words[index]
    }

    /// Physical angle in `[-π/2, π/2)` the codeword points to.
    pub fn angle(&self, index: usize) -> f64 {
        codeword_sin_angle(index, self.len()).asin()
    }

    /// Codeword whose sin-angle is closest to `sin θ`.
    pub fn nearest(&self, theta: f64) -> usize {
        let s = theta.sin();
        (0..self.len())
            .min_by(|&a, &b| {
                let da = (codeword_sin_angle(a, self.len()) - s).abs();
                let db = (codeword_sin_angle(b, self.len()) - s).abs();
                da.total_cmp(&db)
            })
            .expect("codebook is nonempty")
    }
}
