use crate::numerics::Matrix;
use crate::util::log_sum_exp;
use crate::{Error, Result};

/// Jensen lower bound of the log-likelihood:
/// `Q(q, theta) = sum_i sum_j q_ij ln( P(x_i, y_i=j | theta) / q_ij )`,
/// where `joint_log_lik(i, j)` returns `ln P(x_i, y_i=j | theta)` and `q`
/// holds one responsibility row per observation.
///
/// `Q <= L(theta)` for every valid `q`, with equality exactly when `q` is
/// the posterior over the hidden labels.
pub fn em_lower_bound(
    joint_log_lik: impl Fn(usize, usize) -> f64,
    q: &Matrix,
) -> Result<f64> {
    let (m, k) = (q.rows(), q.cols());
    if m == 0 || k == 0 {
        return Err(Error::EmptyInput("em_lower_bound"));
    }
    let mut bound = 0.0;
    for i in 0..m {
        let row_sum: f64 = (0..k).map(|j| q.get(i, j)).sum();
        if (row_sum - 1.0).abs() > 1e-9 || (0..k).any(|j| q.get(i, j) < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "responsibility row {i} is not a distribution"
            )));
        }
        for j in 0..k {
            let qij = q.get(i, j);
            if qij == 0.0 {
                continue;
            }
            bound += qij * (joint_log_lik(i, j) - qij.ln());
        }
    }
    Ok(bound)
}

/// Exact data log-likelihood `L(theta) = sum_i ln sum_j P(x_i, y_i=j)` from
/// the same joint used by [`em_lower_bound`].
pub fn marginal_log_likelihood(
    joint_log_lik: impl Fn(usize, usize) -> f64,
    m: usize,
    k: usize,
) -> f64 {
    (0..m)
        .map(|i| {
            let terms: Vec<f64> = (0..k).map(|j| joint_log_lik(i, j)).collect();
            log_sum_exp(&terms)
        })
        .sum()
}
