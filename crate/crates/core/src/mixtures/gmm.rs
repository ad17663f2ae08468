use serde::{Deserialize, Serialize};

use super::{EmOptions, EmTrace};
use crate::numerics::{Matrix, RngState};
use crate::util::log_sum_exp;
use crate::{Error, Result};

const COLLAPSE_VARIANCE: f64 = 1e-12;

/// Isotropic Gaussian mixture: each component has a center and a scalar
/// variance (covariance `sigma^2 * I`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixtureParams {
    pub weights: Vec<f64>,
    pub centers: Vec<Vec<f64>>,
    pub variances: Vec<f64>,
}

impl GaussianMixtureParams {
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let k = self.k();
        if k == 0 {
            return Err(Error::EmptyInput("gmm init"));
        }
        if self.centers.len() != k || self.variances.len() != k {
            return Err(Error::Shape("init component counts disagree".into()));
        }
        if self.centers.iter().any(|c| c.len() != dim) {
            return Err(Error::Shape("init centers have the wrong dimension".into()));
        }
        let wsum: f64 = self.weights.iter().sum();
        if (wsum - 1.0).abs() > 1e-9 || self.weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidParameter(
                "init weights must be positive and sum to 1".into(),
            ));
        }
        if self.variances.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidParameter("init variances must be positive".into()));
        }
        Ok(())
    }
}

fn log_component_density(x: &[f64], center: &[f64], var: f64) -> f64 {
    let d = x.len() as f64;
    let sq: f64 = x
        .iter()
        .zip(center)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    -0.5 * d * (2.0 * std::f64::consts::PI * var).ln() - sq / (2.0 * var)
}

fn log_likelihood(points: &[Vec<f64>], theta: &GaussianMixtureParams) -> f64 {
    points
        .iter()
        .map(|x| {
            let terms: Vec<f64> = (0..theta.k())
                .map(|j| {
                    theta.weights[j].ln()
                        + log_component_density(x, &theta.centers[j], theta.variances[j])
                })
                .collect();
            log_sum_exp(&terms)
        })
        .sum()
}

/// Seeded default start: `k` distinct data points as centers, uniform
/// weights, pooled variance everywhere.
pub fn default_gmm_init(points: &[Vec<f64>], k: usize, seed: u64) -> GaussianMixtureParams {
    let mut rng = RngState::new(seed);
    let chosen = rng.choose_distinct(points.len(), k);
    let dim = points[0].len() as f64;
    let m = points.len() as f64;
    let mut mean = vec![0.0; points[0].len()];
    for p in points {
        for (s, x) in mean.iter_mut().zip(p) {
            *s += x / m;
        }
    }
    let pooled: f64 = points
        .iter()
        .map(|p| {
            p.iter()
                .zip(&mean)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .sum::<f64>()
        / (m * dim);
    GaussianMixtureParams {
        weights: vec![1.0 / k as f64; k],
        centers: chosen.into_iter().map(|i| points[i].clone()).collect(),
        variances: vec![pooled.max(1e-6); k],
    }
}

/// EM for an isotropic Gaussian mixture.
///
/// Responsibilities come from the scaled Bayes rule and row-normalize to
/// one; the M-step reweights means and variances, the variance update
/// dividing by `dim * sum(w)`. A component whose variance falls under
/// `1e-12` is reported as collapsed.
pub fn em_gmm(
    points: &[Vec<f64>],
    k: usize,
    init: Option<GaussianMixtureParams>,
    opts: &EmOptions,
) -> Result<(GaussianMixtureParams, Matrix, EmTrace)> {
    if points.is_empty() {
        return Err(Error::EmptyInput("em_gmm"));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > points.len() {
        return Err(Error::InvalidParameter(format!(
            "k={k} exceeds the number of points {}",
            points.len()
        )));
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::Shape("points must share a nonzero dimension".into()));
    }
    let mut theta = match init {
        Some(t) => {
            t.validate(dim)?;
            t
        }
        None => default_gmm_init(points, k, opts.seed),
    };

    let m = points.len();
    let mut resp = Matrix::zeros(m, k);
    let mut trace = vec![log_likelihood(points, &theta)];
    let mut converged = false;
    for _ in 0..opts.max_iter {
        // E-step.
        for (i, x) in points.iter().enumerate() {
            let terms: Vec<f64> = (0..k)
                .map(|j| {
                    theta.weights[j].ln()
                        + log_component_density(x, &theta.centers[j], theta.variances[j])
                })
                .collect();
            let z = log_sum_exp(&terms);
            for (j, t) in terms.iter().enumerate() {
                resp.set(i, j, (t - z).exp());
            }
        }
        // M-step.
        let mut weights = vec![0.0; k];
        let mut centers = vec![vec![0.0; dim]; k];
        let mut variances = vec![0.0; k];
        for j in 0..k {
            let wsum: f64 = (0..m).map(|i| resp.get(i, j)).sum();
            if wsum <= 0.0 {
                return Err(Error::ComponentCollapse {
                    component: j,
                    variance: 0.0,
                });
            }
            weights[j] = wsum / m as f64;
            for (i, x) in points.iter().enumerate() {
                let w = resp.get(i, j);
                for (c, xv) in centers[j].iter_mut().zip(x) {
                    *c += w * xv;
                }
            }
            for c in centers[j].iter_mut() {
                *c /= wsum;
            }
            let sq: f64 = points
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let d: f64 = x
                        .iter()
                        .zip(&centers[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    resp.get(i, j) * d
                })
                .sum();
            variances[j] = sq / (dim as f64 * wsum);
            if variances[j] < COLLAPSE_VARIANCE {
                return Err(Error::ComponentCollapse {
                    component: j,
                    variance: variances[j],
                });
            }
        }
        theta = GaussianMixtureParams {
            weights,
            centers,
            variances,
        };
        let ll = log_likelihood(points, &theta);
        let gain = ll - trace.last().unwrap();
        trace.push(ll);
        if gain.abs() < opts.tol {
            converged = true;
            break;
        }
    }
    let iterations = trace.len() - 1;
    Ok((
        theta,
        resp,
        EmTrace {
            log_likelihood: trace,
            iterations,
            converged,
        },
    ))
}
