//! Relative entropy, maximum likelihood over empirical distributions, and
//! maximum-entropy fitting of Gibbs distributions under linear constraints.

use serde::{Deserialize, Serialize};

use crate::numerics::Matrix;
use crate::{Error, Result};

/// Relative entropy between nonnegative vectors:
/// `D(x||y) = sum x ln(x/y) - sum x + sum y`, with the conventions
/// `0 ln(0/0) = 0`, `0 ln(0/y) = 0`, and `x ln(x/0) = +inf`.
///
/// `+inf` is a legal return value, not an error.
pub fn relative_entropy(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape("relative_entropy needs equal lengths".into()));
    }
    if x.iter().chain(y.iter()).any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("inputs must be nonnegative".into()));
    }
    let mut acc = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        if xi == 0.0 {
            acc += yi;
            continue;
        }
        if yi == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += xi * (xi / yi).ln() - xi + yi;
    }
    Ok(acc)
}

/// Maximum-likelihood distribution for an occurrence-frequency vector:
/// the normalization `f / ||f||_1`. Zero counts map to exact zeros.
pub fn ml_empirical(f: &[f64]) -> Result<Vec<f64>> {
    if f.is_empty() {
        return Err(Error::EmptyInput("ml_empirical"));
    }
    if f.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("frequencies must be nonnegative".into()));
    }
    let total: f64 = f.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(f.iter().map(|&v| if v == 0.0 { 0.0 } else { v / total }).collect())
}

/// Shannon entropy `-sum p ln p` with `0 ln 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "entropy needs a distribution, got sum {total}"
        )));
    }
    if p.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("probabilities must be nonnegative".into()));
    }
    Ok(-p.iter().map(|&v| crate::util::xlnx(v)).sum::<f64>())
}

/// Gibbs distribution `p_i = p0_i exp(sum_j mu_j f_ji) / Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsModel {
    pub prior: Vec<f64>,
    /// `k x n`: one row per constraint, one column per state.
    pub features: Matrix,
    pub weights: Vec<f64>,
    pub normalizer: f64,
}

impl GibbsModel {
    /// The distribution in explicit form; sums to one by construction.
    pub fn probabilities(&self) -> Vec<f64> {
        let scores = self.scores();
        scores.iter().map(|s| s.exp() / self.normalizer).collect()
    }

    /// Expectation of each feature row under the model.
    pub fn feature_expectations(&self) -> Vec<f64> {
        let p = self.probabilities();
        (0..self.features.rows())
            .map(|j| {
                (0..p.len())
                    .map(|i| self.features.get(j, i) * p[i])
                    .sum()
            })
            .collect()
    }

    fn scores(&self) -> Vec<f64> {
        (0..self.prior.len())
            .map(|i| {
                let mut s = self.prior[i].ln();
                for j in 0..self.features.rows() {
                    s += self.weights[j] * self.features.get(j, i);
                }
                s
            })
            .collect()
    }
}

fn partition(prior: &[f64], features: &Matrix, mu: &[f64]) -> (f64, Vec<f64>) {
    let n = prior.len();
    let scores: Vec<f64> = (0..n)
        .map(|i| {
            let mut s = prior[i].ln();
            for (j, &m) in mu.iter().enumerate() {
                s += m * features.get(j, i);
            }
            s
        })
        .collect();
    let log_z = crate::util::log_sum_exp(&scores);
    let p = scores.iter().map(|s| (s - log_z).exp()).collect();
    (log_z, p)
}

/// Dual objective of the constrained problem: `mu'b - ln Z(mu)`. Concave in
/// `mu`; its gradient is `b - E_p[f]`.
fn dual_value(log_z: f64, mu: &[f64], targets: &[f64]) -> f64 {
    mu.iter().zip(targets).map(|(m, b)| m * b).sum::<f64>() - log_z
}

const MAXENT_MAX_ITER: usize = 200;
const MAXENT_WEIGHT_CAP: f64 = 1e6;

/// Fits the distribution closest to `prior` in relative entropy subject to
/// the linear constraints `E_p[f_j] = b_j`, by ascent on the concave dual
/// over the weights: damped Newton for a single constraint, gradient ascent
/// with backtracking for several.
///
/// Targets outside the feasible hull are reported as infeasible once the
/// iteration cap is reached or the weights blow past `1e6` in norm.
pub fn maxent_fit(prior: &[f64], features: &Matrix, targets: &[f64], tol: f64) -> Result<GibbsModel> {
    let n = prior.len();
    let k = features.rows();
    if n == 0 {
        return Err(Error::EmptyInput("maxent_fit"));
    }
    if features.cols() != n {
        return Err(Error::Shape(format!(
            "features are {}x{}, prior has {} states",
            k,
            features.cols(),
            n
        )));
    }
    if targets.len() != k {
        return Err(Error::Shape("one target per constraint row".into()));
    }
    if prior.iter().any(|&p| p <= 0.0) {
        return Err(Error::InvalidParameter("prior must be strictly positive".into()));
    }
    let prior_sum: f64 = prior.iter().sum();
    if (prior_sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter("prior must sum to 1".into()));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }

    let mut mu = vec![0.0; k];
    let mut residual = f64::INFINITY;
    for iteration in 0..MAXENT_MAX_ITER {
        let (log_z, p) = partition(prior, features, &mu);
        let expectations: Vec<f64> = (0..k)
            .map(|j| (0..n).map(|i| features.get(j, i) * p[i]).sum())
            .collect();
        let gradient: Vec<f64> = targets
            .iter()
            .zip(&expectations)
            .map(|(b, e)| b - e)
            .collect();
        residual = gradient.iter().map(|g| g.abs()).fold(0.0, f64::max);
        if residual <= tol {
            let z = log_z.exp();
            return Ok(GibbsModel {
                prior: prior.to_vec(),
                features: features.clone(),
                weights: mu,
                normalizer: z,
            });
        }
        let mu_norm = mu.iter().map(|m| m * m).sum::<f64>().sqrt();
        if mu_norm > MAXENT_WEIGHT_CAP {
            return Err(Error::InfeasibleTargets {
                residual,
                iterations: iteration,
            });
        }

        if k == 1 {
            // Damped Newton on the scalar log-partition: g'' = -Var_p[f].
            let mean = expectations[0];
            let var: f64 = (0..n)
                .map(|i| {
                    let d = features.get(0, i) - mean;
                    d * d * p[i]
                })
                .sum();
            let mut step = if var > 1e-300 {
                gradient[0] / var
            } else {
                gradient[0].signum() * 1.0
            };
            // Halve until the dual improves.
            let current = dual_value(log_z, &mu, targets);
            loop {
                let candidate = vec![mu[0] + step];
                let (lz, _) = partition(prior, features, &candidate);
                if dual_value(lz, &candidate, targets) > current || step.abs() < 1e-16 {
                    mu = candidate;
                    break;
                }
                step *= 0.5;
            }
        } else {
            // Gradient ascent with backtracking line search.
            let current = dual_value(log_z, &mu, targets);
            let mut step = 1.0;
            loop {
                let candidate: Vec<f64> = mu
                    .iter()
                    .zip(&gradient)
                    .map(|(m, g)| m + step * g)
                    .collect();
                let (lz, _) = partition(prior, features, &candidate);
                if dual_value(lz, &candidate, targets) > current || step < 1e-16 {
                    mu = candidate;
                    break;
                }
                step *= 0.5;
            }
        }
    }
    Err(Error::InfeasibleTargets {
        residual,
        iterations: MAXENT_MAX_ITER,
    })
}
