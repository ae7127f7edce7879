use ndarray::{ArrayD, ArrayView1, ArrayView2, ArrayViewMut1, ArrayViewMut2, Ix1, Ix2, IxDyn};

use crate::error::{dim_mismatch, Result};

/// One named parameter tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub value: ArrayD<f64>,
}

/// Ordered named parameter tensors. Shapes are fixed at construction; the
/// flat view concatenates tensors in declaration order, each row-major.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParamSet {
    params: Vec<Param>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a tensor and returns its index.
    pub fn push(&mut self, name: impl Into<String>, value: ArrayD<f64>) -> usize {
        self.params.push(Param {
            name: name.into(),
            value,
        });
        self.params.len() - 1
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Param> {
        self.params.iter()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut Param> {
        self.params.iter_mut()
    }

    pub fn get(&self, i: usize) -> &Param {
        &self.params[i]
    }

    pub fn get_mut(&mut self, i: usize) -> &mut Param {
        &mut self.params[i]
    }

    pub fn matrix(&self, i: usize) -> ArrayView2<'_, f64> {
        self.params[i]
            .value
            .view()
            .into_dimensionality::<Ix2>()
            .expect("2-D parameter")
    }

    pub fn vector(&self, i: usize) -> ArrayView1<'_, f64> {
        self.params[i]
            .value
            .view()
            .into_dimensionality::<Ix1>()
            .expect("1-D parameter")
    }

    pub fn matrix_mut(&mut self, i: usize) -> ArrayViewMut2<'_, f64> {
        self.params[i]
            .value
            .view_mut()
            .into_dimensionality::<Ix2>()
            .expect("2-D parameter")
    }

    pub fn vector_mut(&mut self, i: usize) -> ArrayViewMut1<'_, f64> {
        self.params[i]
            .value
            .view_mut()
            .into_dimensionality::<Ix1>()
            .expect("1-D parameter")
    }

    /// Same names and shapes, all zeros.
    pub fn zeros_like(&self) -> Self {
        Self {
            params: self
                .params
                .iter()
                .map(|p| Param {
                    name: p.name.clone(),
                    value: ArrayD::zeros(IxDyn(p.value.shape())),
                })
                .collect(),
        }
    }

    pub fn shapes(&self) -> Vec<Vec<usize>> {
        self.params
            .iter()
            .map(|p| p.value.shape().to_vec())
            .collect()
    }

    pub fn same_layout(&self, other: &Self) -> bool {
        self.params.len() == other.params.len()
            && self
                .params
                .iter()
                .zip(&other.params)
                .all(|(a, b)| a.name == b.name && a.value.shape() == b.value.shape())
    }

    pub fn num_values(&self) -> usize {
        self.params.iter().map(|p| p.value.len()).sum()
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_values());
        for p in &self.params {
            out.extend(p.value.iter());
        }
        out
    }

    pub fn set_flat(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.num_values() {
            return Err(dim_mismatch(
                "ParamSet::set_flat",
                self.num_values(),
                values.len(),
            ));
        }
        let mut it = values.iter();
        for p in &mut self.params {
            for v in p.value.iter_mut() {
                *v = *it.next().expect("length checked");
            }
        }
        Ok(())
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, other: &Self, scale: f64) -> Result<()> {
        if !self.same_layout(other) {
            return Err(dim_mismatch(
                "ParamSet::add_scaled",
                self.shapes(),
                other.shapes(),
            ));
        }
        for (a, b) in self.params.iter_mut().zip(&other.params) {
            a.value.scaled_add(scale, &b.value);
        }
        Ok(())
    }

    pub fn scale(&mut self, s: f64) {
        for p in &mut self.params {
            p.value.mapv_inplace(|v| v * s);
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.params
            .iter()
            .flat_map(|p| p.value.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }
}

/// `target ← τ · online + (1 − τ) · target`, elementwise.
pub fn soft_update(target: &mut ParamSet, online: &ParamSet, tau: f64) -> Result<()> {
    if !target.same_layout(online) {
        return Err(dim_mismatch(
            "soft_update",
            target.shapes(),
            online.shapes(),
        ));
    }
    for (t, o) in target.params.iter_mut().zip(&online.params) {
        ndarray::Zip::from(&mut t.value)
            .and(&o.value)
            .for_each(|t, &o| *t = tau * o + (1.0 - tau) * *t);
    }
    Ok(())
}
