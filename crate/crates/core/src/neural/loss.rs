use ndarray::Array2;

use crate::error::{dim_mismatch, Result};

/// Mean-square error `(1/N) Σ (y − t)²` over all entries, with its gradient
/// with respect to `y`.
pub fn mse_loss(y: &Array2<f64>, target: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
    if y.dim() != target.dim() {
        return Err(dim_mismatch("mse_loss", target.dim(), y.dim()));
    }
    let n = y.len().max(1) as f64;
    let diff = y - target;
    let loss = diff.iter().map(|d| d * d).sum::<f64>() / n;
    Ok((loss, diff * (2.0 / n)))
}

/// Batch mean of a scalar head, `(1/N) Σ q`, with its (constant) gradient.
pub fn mean_output(q: &Array2<f64>) -> (f64, Array2<f64>) {
    let n = q.nrows().max(1) as f64;
    let mean = q.sum() / n;
    (mean, Array2::from_elem(q.dim(), 1.0 / n))
}
