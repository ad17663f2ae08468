use serde::{Deserialize, Serialize};

use crate::numerics::Matrix;
use crate::{Error, Result};

/// Outcome of the symmetric balancing iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinkhornResult {
    pub matrix: Matrix,
    pub iterations: usize,
    /// Largest deviation of any row sum from one at exit.
    pub residual: f64,
    pub converged: bool,
}

/// Iterates `K <- D^{-1/2} K D^{-1/2}` with `D = diag(K 1)` until every
/// row (and by symmetry, column) sums to one within `tol`. Symmetry is
/// preserved exactly by the two-sided scaling. No convergence rate is
/// asserted; the iteration count is capped and the residual reported.
pub fn sinkhorn_ds(k: &Matrix, tol: f64, max_iter: usize) -> Result<SinkhornResult> {
    if !k.is_square() {
        return Err(Error::Shape("sinkhorn needs a square matrix".into()));
    }
    if k.max_asymmetry() > 1e-12 * k.frobenius_norm().max(1.0) {
        return Err(Error::NotSymmetric);
    }
    if k.entries().iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidParameter("entries must be nonnegative".into()));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    let n = k.rows();
    let mut current = k.clone();
    let mut residual = f64::INFINITY;
    for iteration in 0..max_iter {
        let sums: Vec<f64> = (0..n).map(|i| current.row(i).iter().sum()).collect();
        if let Some(i) = sums.iter().position(|&s| s <= 0.0) {
            return Err(Error::ZeroRowSum(i));
        }
        residual = sums.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
        if residual <= tol {
            return Ok(SinkhornResult {
                matrix: current,
                iterations: iteration,
                residual,
                converged: true,
            });
        }
        let inv_sqrt: Vec<f64> = sums.iter().map(|s| 1.0 / s.sqrt()).collect();
        let mut next = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                next.set(i, j, current.get(i, j) * inv_sqrt[i] * inv_sqrt[j]);
            }
        }
        current = next;
    }
    Ok(SinkhornResult {
        matrix: current,
        iterations: max_iter,
        residual,
        converged: false,
    })
}
