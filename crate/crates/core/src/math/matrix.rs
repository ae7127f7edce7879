use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::C64;
use crate::error::{dim_mismatch, Result};

/// Dense row-major complex matrix with fixed dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dim_mismatch(
                "ComplexMatrix::from_row_major",
                rows * cols,
                data.len(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(dim_mismatch("ComplexMatrix::from_columns", rows, bad.len()));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[C64]) -> Result<()> {
        if values.len() != self.rows || j >= self.cols {
            return Err(dim_mismatch(
                "ComplexMatrix::set_column",
                (self.rows, self.cols),
                (values.len(), j),
            ));
        }
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
        Ok(())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(dim_mismatch(
                "ComplexMatrix::matmul",
                self.shape(),
                rhs.shape(),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(dim_mismatch("ComplexMatrix::mul_vec", self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Result<C64> {
        if self.rows != self.cols {
            return Err(dim_mismatch("ComplexMatrix::trace", "square", self.shape()));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != rhs.shape() {
            return Err(dim_mismatch(
                "ComplexMatrix::add",
                self.shape(),
                rhs.shape(),
            ));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != rhs.shape() {
            return Err(dim_mismatch(
                "ComplexMatrix::sub",
                self.shape(),
                rhs.shape(),
            ));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, rhs: &ComplexMatrix, s: C64) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(dim_mismatch(
                "ComplexMatrix::add_assign_scaled",
                self.shape(),
                rhs.shape(),
            ));
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b * s;
        }
        Ok(())
    }

    /// Rank-one matrix `u vᴴ`.
    pub fn outer(u: &[C64], v: &[C64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), rhs.shape());
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matmul_checks_dimensions() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&b).is_err());
        assert!(a.matmul(&b.transpose()).is_ok());
    }

    #[test]
    fn matmul_small() {
        let a =
            ComplexMatrix::from_row_major(2, 2, vec![c(1., 0.), c(0., 1.), c(2., 0.), c(0., 0.)])
                .unwrap();
        let b = ComplexMatrix::from_row_major(2, 1, vec![c(1., 1.), c(0., -1.)]).unwrap();
        let p = a.matmul(&b).unwrap();
        assert_eq!(p[(0, 0)], c(1., 1.) + c(0., 1.) * c(0., -1.));
        assert_eq!(p[(1, 0)], c(2., 2.));
        assert_eq!(a.mul_vec(&[c(1., 1.), c(0., -1.)]).unwrap(), p.column(0));
    }

    #[test]
    fn adjoint_and_trace() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        let ah = a.adjoint();
        assert_eq!(ah[(0, 2)], c(2., -0.));
        assert_eq!(a.trace().unwrap(), c(3., 3.));
        assert!(ComplexMatrix::zeros(2, 3).trace().is_err());
    }
}
