use serde::{Deserialize, Serialize};

use crate::numerics::{cholesky, solve_spd, Matrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CovarianceMode {
    /// Covariance restricted to `sigma^2 * I`.
    Isotropic,
    /// Full symmetric covariance.
    Full,
}

/// Parameters of a multivariate Gaussian fitted by maximum likelihood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub mean: Vec<f64>,
    /// Always stored as a full matrix; isotropic fits store `sigma^2 * I`.
    pub covariance: Matrix,
    pub mode: CovarianceMode,
    /// Set when the fitted covariance is not (numerically) invertible.
    /// Failure then surfaces at the downstream inversion, not here.
    pub singular: bool,
}

impl GaussianParams {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// `sigma^2` of an isotropic fit (first diagonal entry).
    pub fn isotropic_variance(&self) -> f64 {
        self.covariance.get(0, 0)
    }
}

/// Bias of a coin by maximum likelihood: the fraction of `0` outcomes
/// (the convention that "heads" is encoded as 0).
pub fn coin_mle(sample: &[u8]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptyInput("coin_mle"));
    }
    if sample.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("coin outcomes must be 0 or 1".into()));
    }
    let zeros = sample.iter().filter(|&&b| b == 0).count();
    Ok(zeros as f64 / sample.len() as f64)
}

/// Maximum-likelihood Gaussian fit.
///
/// The mean is the sample mean. Isotropic mode uses
/// `sigma^2 = (1/(k n)) sum ||x_i - mu||^2` over `k` points in `n`
/// dimensions; full mode uses `E = (1/k) sum (x-mu)(x-mu)'`. A full fit
/// from `k <= n` points (or one whose covariance fails Cholesky) is
/// returned with the `singular` flag set rather than an error.
pub fn gaussian_mle(points: &[Vec<f64>], mode: CovarianceMode) -> Result<GaussianParams> {
    if points.is_empty() {
        return Err(Error::EmptyInput("gaussian_mle"));
    }
    let n = points[0].len();
    if n == 0 || points.iter().any(|p| p.len() != n) {
        return Err(Error::Shape("points must share a nonzero dimension".into()));
    }
    let k = points.len();
    let mut mean = vec![0.0; n];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= k as f64;
    }

    match mode {
        CovarianceMode::Isotropic => {
            let ssd: f64 = points
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&mean)
                        .map(|(x, m)| (x - m) * (x - m))
                        .sum::<f64>()
                })
                .sum();
            let sigma2 = ssd / (k as f64 * n as f64);
            Ok(GaussianParams {
                mean,
                covariance: Matrix::identity(n).scale(sigma2),
                mode,
                singular: sigma2 <= 0.0,
            })
        }
        CovarianceMode::Full => {
            let mut cov = Matrix::zeros(n, n);
            for p in points {
                for i in 0..n {
                    let di = p[i] - mean[i];
                    for j in 0..n {
                        let dj = p[j] - mean[j];
                        cov.set(i, j, cov.get(i, j) + di * dj);
                    }
                }
            }
            let cov = cov.scale(1.0 / k as f64);
            let singular = k <= n || cholesky(&cov).is_err();
            Ok(GaussianParams {
                mean,
                covariance: cov,
                mode,
                singular,
            })
        }
    }
}

/// Separating hyperplane between two equal-prior Gaussian classes with a
/// shared covariance: `f(x) = w'x - offset` with `w = E^{-1}(mu1 - mu2)`
/// and `offset = (mu1+mu2)'E^{-1}(mu1-mu2)/2`. Positive values decide
/// class 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalBoundary {
    pub w: Vec<f64>,
    pub offset: f64,
}

impl NormalBoundary {
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - self.offset
    }

    /// Same boundary with `w` scaled to unit length.
    pub fn normalized(&self) -> NormalBoundary {
        let norm = self.w.iter().map(|v| v * v).sum::<f64>().sqrt();
        NormalBoundary {
            w: self.w.iter().map(|v| v / norm).collect(),
            offset: self.offset / norm,
        }
    }
}

/// Bayes-optimal boundary for two normal classes sharing covariance `E`.
/// The two parameter sets must carry (numerically) the same covariance.
pub fn two_class_normal_boundary(
    g1: &GaussianParams,
    g2: &GaussianParams,
) -> Result<NormalBoundary> {
    if g1.dim() != g2.dim() {
        return Err(Error::Shape("class means differ in dimension".into()));
    }
    let e = &g1.covariance;
    let drift = e.sub(&g2.covariance)?.frobenius_norm();
    if drift > 1e-9 * e.frobenius_norm().max(1.0) {
        return Err(Error::InvalidParameter(
            "classes must share one covariance matrix".into(),
        ));
    }
    let diff: Vec<f64> = g1.mean.iter().zip(&g2.mean).map(|(a, b)| a - b).collect();
    let w = solve_spd(e, &diff)?;
    let mid: Vec<f64> = g1
        .mean
        .iter()
        .zip(&g2.mean)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let offset = mid.iter().zip(&w).map(|(m, wv)| m * wv).sum();
    Ok(NormalBoundary { w, offset })
}
