use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::C64;

/// Seedable random stream. Equal seeds give bitwise-equal draw sequences on
/// every platform.
#[derive(Clone, Debug)]
pub struct SimRng {
    seed: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream derived from `(seed, label)` only; the draw
    /// position of any other stream does not matter.
    pub fn derive(seed: u64, label: &str) -> Self {
        Self::new(splitmix64(seed ^ splitmix64(fnv1a(label))))
    }

    /// Substream labelled relative to this stream's seed.
    pub fn substream(&self, label: &str) -> Self {
        Self::derive(self.seed, label)
    }

    /// Consumes one draw from this stream and derives a fresh stream from it.
    /// Repeated forks yield distinct streams (one per episode, say).
    pub fn fork(&mut self, label: &str) -> Self {
        let draw = self.inner.next_u64();
        Self::derive(draw, label)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        // 53 random mantissa bits.
        let u = (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        lo + (hi - lo) * u
    }

    /// Uniform integer in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be nonempty");
        rand::Rng::random_range(&mut self.inner, 0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Circularly-symmetric complex Gaussian with total variance `var`.
    pub fn complex_normal(&mut self, var: f64) -> C64 {
        let s = (var / 2.0).sqrt();
        C64::new(s * self.standard_normal(), s * self.standard_normal())
    }
}

impl RngCore for SimRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
