use serde::{Deserialize, Serialize};

use crate::numerics::{canonical_sign, sym_eig, Matrix};
use crate::{Error, Result};

/// Ordered orthonormal basis with eigenvalues and the centering mean.
///
/// Eigenvalues are those of the (uncentered-scale) scatter matrix `A A'`
/// built from mean-shifted data columns; divide by the sample count for
/// sample-covariance scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBasis {
    /// `n x q`, orthonormal columns, descending eigenvalue order.
    pub basis: Matrix,
    /// Scatter-matrix eigenvalues for the retained axes, descending.
    pub values: Vec<f64>,
    /// Mean vector removed from the data before analysis.
    pub center: Vec<f64>,
}

impl SpectralBasis {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn q(&self) -> usize {
        self.basis.cols()
    }

    /// Projects a point onto the retained axes (after centering).
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Shape("projection dimension mismatch".into()));
        }
        let shifted: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        self.basis.transpose().matvec(&shifted)
    }

    /// Reconstruction of a point from its projection: `mu + U U'(x - mu)`.
    pub fn reconstruct(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.project(x)?;
        let back = self.basis.matvec(&y)?;
        Ok(back.iter().zip(&self.center).map(|(a, b)| a + b).collect())
    }

    /// Per-axis variance of the projected sample: eigenvalue over count.
    pub fn projected_variances(&self, sample_count: usize) -> Vec<f64> {
        self.values.iter().map(|l| l / sample_count as f64).collect()
    }
}

pub(crate) fn center_of(points: &[Vec<f64>]) -> Vec<f64> {
    let n = points[0].len();
    let mut mean = vec![0.0; n];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= points.len() as f64;
    }
    mean
}

/// Centered data matrix with points as columns (`n x m`).
pub(crate) fn centered_columns(points: &[Vec<f64>], center: &[f64]) -> Result<Matrix> {
    let cols: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(center).map(|(a, b)| a - b).collect())
        .collect();
    Matrix::from_columns(&cols)
}

fn validate(points: &[Vec<f64>], q: usize) -> Result<usize> {
    if points.len() < 2 {
        return Err(Error::EmptyInput("pca needs at least two points"));
    }
    let n = points[0].len();
    if n == 0 || points.iter().any(|p| p.len() != n) {
        return Err(Error::Shape("points must share a nonzero dimension".into()));
    }
    if q == 0 || q > n.min(points.len()) {
        return Err(Error::Shape(format!(
            "q={q} outside 1..=min(dim={n}, count={})",
            points.len()
        )));
    }
    Ok(n)
}

/// Principal component analysis by direct eigendecomposition of the
/// scatter matrix `A A'` of the centered data.
pub fn pca(points: &[Vec<f64>], q: usize) -> Result<SpectralBasis> {
    validate(points, q)?;
    let center = center_of(points);
    let a = centered_columns(points, &center)?;
    let scatter = a.matmul(&a.transpose())?;
    let eig = sym_eig(&scatter, 1e-12)?;
    Ok(SpectralBasis {
        basis: eig.eigenvectors.take_columns(q),
        values: eig.eigenvalues[..q].to_vec(),
        center,
    })
}

/// PCA through the Gram matrix `A'A` — the route of choice when the
/// dimension far exceeds the sample count. The basis is `A Q D^{-1/2}`
/// for eigenpairs `(Q, D)` of `A'A`; it spans the same axes as [`pca`]
/// up to sign. Requesting more axes than the Gram rank is an error.
pub fn pca_smallsample(points: &[Vec<f64>], q: usize) -> Result<SpectralBasis> {
    validate(points, q)?;
    let center = center_of(points);
    let a = centered_columns(points, &center)?;
    let gram = a.transpose().matmul(&a)?;
    let eig = sym_eig(&gram, 1e-12)?;
    let rank_cutoff = eig.eigenvalues[0].max(0.0) * 1e-12;
    let rank = eig.eigenvalues.iter().filter(|&&l| l > rank_cutoff).count();
    if q > rank {
        return Err(Error::RankExceeded { q, rank });
    }
    let mut columns = Vec::with_capacity(q);
    for i in 0..q {
        let lambda = eig.eigenvalues[i];
        let qi = eig.eigenvectors.column(i);
        let mut u = a.matvec(&qi)?;
        let scale = 1.0 / lambda.sqrt();
        for x in u.iter_mut() {
            *x *= scale;
        }
        canonical_sign(&mut u);
        columns.push(u);
    }
    Ok(SpectralBasis {
        basis: Matrix::from_columns(&columns)?,
        values: eig.eigenvalues[..q].to_vec(),
        center,
    })
}
