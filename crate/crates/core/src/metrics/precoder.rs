use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Result};
use crate::math::{Codebook, ComplexMatrix, SimRng};

/// Constant-modulus analog precoder; column `u` is codebook entry
/// `codewords[u]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Precoder {
    matrix: ComplexMatrix,
    codewords: Vec<usize>,
}

impl Precoder {
    pub fn from_codewords(codebook: &Codebook, codewords: &[usize]) -> Self {
        let columns: Vec<_> = codewords
            .iter()
            .map(|&c| codebook.word(c).to_vec())
            .collect();
        let matrix = if columns.is_empty() {
            ComplexMatrix::zeros(codebook.antennas(), 0)
        } else {
            ComplexMatrix::from_columns(&columns).expect("codewords share a length")
        };
        Self {
            matrix,
            codewords: codewords.to_vec(),
        }
    }

    /// One uniformly random codeword per column.
    pub fn random(codebook: &Codebook, users: usize, rng: &mut SimRng) -> Self {
        let idx: Vec<usize> = (0..users).map(|_| rng.index(codebook.len())).collect();
        Self::from_codewords(codebook, &idx)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn codewords(&self) -> &[usize] {
        &self.codewords
    }

    pub fn users(&self) -> usize {
        self.codewords.len()
    }

    pub fn replace_column(
        &mut self,
        user: usize,
        codeword: usize,
        codebook: &Codebook,
    ) -> Result<()> {
        if user >= self.users() || codeword >= codebook.len() {
            return Err(dim_mismatch(
                "Precoder::replace_column",
                (self.users(), codebook.len()),
                (user, codeword),
            ));
        }
        self.matrix.set_column(user, codebook.word(codeword))?;
        self.codewords[user] = codeword;
        Ok(())
    }

    pub fn is_constant_modulus(&self, tol: f64) -> bool {
        self.matrix
            .as_slice()
            .iter()
            .all(|z| (z.norm() - 1.0).abs() <= tol)
    }
}
