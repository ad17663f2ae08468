use serde::{Deserialize, Serialize};

use crate::numerics::{sym_eig, Matrix};
use crate::svm::{gram, kernel_eval, KernelSpec};
use crate::{Error, Result};

/// Kernel-PCA basis handle. The principal axes live in feature space and
/// are never materialized; projection goes through the kernel vector
/// against the training points. No feature-space centering is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpcaHandle {
    pub train_points: Vec<Vec<f64>>,
    pub kernel: KernelSpec,
    /// `m x q` coefficient matrix `V = Q D^{-1/2}` from the Gram
    /// eigendecomposition; projection is `V' k(x)`.
    pub coefficients: Matrix,
    /// Gram eigenvalues of the retained axes, descending.
    pub values: Vec<f64>,
}

/// Builds the kernel-PCA handle from the top-`q` Gram eigenpairs.
/// `q` above the numerical Gram rank is an error.
pub fn kpca(points: &[Vec<f64>], spec: &KernelSpec, q: usize) -> Result<KpcaHandle> {
    if points.is_empty() {
        return Err(Error::EmptyInput("kpca"));
    }
    spec.validate()?;
    if q == 0 || q > points.len() {
        return Err(Error::Shape(format!(
            "q={q} outside 1..={}",
            points.len()
        )));
    }
    let k = gram(spec, points, None)?;
    let eig = sym_eig(&k, 1e-12)?;
    let cutoff = eig.eigenvalues[0].max(0.0) * 1e-12;
    let rank = eig.eigenvalues.iter().filter(|&&l| l > cutoff).count();
    if q > rank {
        return Err(Error::RankExceeded { q, rank });
    }
    let mut coefficients = Matrix::zeros(points.len(), q);
    for j in 0..q {
        let scale = 1.0 / eig.eigenvalues[j].sqrt();
        for i in 0..points.len() {
            coefficients.set(i, j, eig.eigenvectors.get(i, j) * scale);
        }
    }
    Ok(KpcaHandle {
        train_points: points.to_vec(),
        kernel: *spec,
        coefficients,
        values: eig.eigenvalues[..q].to_vec(),
    })
}

fn kernel_vector(handle: &KpcaHandle, x: &[f64]) -> Result<Vec<f64>> {
    handle
        .train_points
        .iter()
        .map(|p| kernel_eval(&handle.kernel, p, x))
        .collect()
}

/// Principal components of `x` in feature space: `y = V' (k(x_1,x), ...)`.
pub fn kpca_project(handle: &KpcaHandle, x: &[f64]) -> Result<Vec<f64>> {
    let kx = kernel_vector(handle, x)?;
    handle.coefficients.transpose().matvec(&kx)
}

/// Squared feature-space distance from `x` to its projection:
/// `k(x,x) - ||y||^2`, clamped at zero for tiny negative round-off.
pub fn kpca_distance(handle: &KpcaHandle, x: &[f64]) -> Result<f64> {
    let y = kpca_project(handle, x)?;
    let kxx = kernel_eval(&handle.kernel, x, x)?;
    let d = kxx - y.iter().map(|v| v * v).sum::<f64>();
    Ok(if d < 0.0 && d > -1e-9 { 0.0 } else { d })
}
