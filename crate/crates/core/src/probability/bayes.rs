use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Loss matrix `l(h_i, h_j)`: cost of deciding class `i` when class `j` is
/// true. Rows index the decision, columns the true class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl LossMatrix {
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::Shape("loss matrix must be square".into()));
        }
        if entries.iter().any(|&l| l < 0.0 || !l.is_finite()) {
            return Err(Error::InvalidParameter("losses must be nonnegative".into()));
        }
        Ok(Self { size, entries })
    }

    /// The 0/1 loss: zero on the diagonal, one elsewhere.
    pub fn zero_one(size: usize) -> Self {
        let entries = (0..size * size)
            .map(|k| if k / size == k % size { 0.0 } else { 1.0 })
            .collect();
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, decided: usize, actual: usize) -> f64 {
        self.entries[decided * self.size + actual]
    }
}

/// Posterior from class-conditional likelihoods and a prior:
/// `posterior_j = likelihood_j * prior_j / sum`.
pub fn posterior_bayes(likelihoods: &[f64], priors: &[f64]) -> Result<Vec<f64>> {
    if likelihoods.len() != priors.len() {
        return Err(Error::Shape("likelihoods and priors differ in length".into()));
    }
    if likelihoods.is_empty() {
        return Err(Error::EmptyInput("posterior_bayes"));
    }
    if likelihoods.iter().any(|&l| l < 0.0) {
        return Err(Error::InvalidParameter("likelihoods must be nonnegative".into()));
    }
    let prior_sum: f64 = priors.iter().sum();
    if (prior_sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "priors must sum to 1, got {prior_sum}"
        )));
    }
    let joint: Vec<f64> = likelihoods.iter().zip(priors).map(|(l, p)| l * p).collect();
    let z: f64 = joint.iter().sum();
    if z <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    Ok(joint.into_iter().map(|j| j / z).collect())
}

/// One step of the incremental Bayes update: the old posterior plays the
/// role of the prior for the next observation's class likelihoods.
pub fn incremental_posterior(prior: &[f64], class_likelihoods: &[f64]) -> Result<Vec<f64>> {
    posterior_bayes(class_likelihoods, prior)
}

/// Outcome of an expected-risk decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    /// Index of the chosen class (lowest index on ties).
    pub chosen: usize,
    /// Expected risk of each candidate decision.
    pub risks: Vec<f64>,
}

/// Minimizes expected risk `R(h_i | x) = sum_j l(h_i, h_j) posterior_j`.
/// Under 0/1 loss this is exactly the MAP decision.
pub fn decide(posterior: &[f64], loss: &LossMatrix) -> Result<Decision> {
    if posterior.len() != loss.size() {
        return Err(Error::Shape("posterior and loss matrix disagree".into()));
    }
    let total: f64 = posterior.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "posterior must sum to 1, got {total}"
        )));
    }
    let risks: Vec<f64> = (0..loss.size())
        .map(|i| {
            posterior
                .iter()
                .enumerate()
                .map(|(j, p)| loss.get(i, j) * p)
                .sum()
        })
        .collect();
    let chosen = risks
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    Ok(Decision { chosen, risks })
}

/// Parameter-count comparison for a fully factorized joint distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterCount {
    /// Independent model: sum of value counts minus the number of variables.
    pub independent: u64,
    /// Unconstrained joint: product of value counts minus one.
    pub full: u64,
}

/// A rank-1 joint table built from per-variable marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentJoint {
    /// Value counts per variable.
    pub dims: Vec<usize>,
    /// Flattened table, row-major with the last variable fastest.
    pub table: Vec<f64>,
    pub parameters: ParameterCount,
}

/// Builds the outer-product joint of independent marginals and reports how
/// many free parameters the factorized form needs versus the full joint.
pub fn independent_joint(marginal_list: &[Vec<f64>]) -> Result<IndependentJoint> {
    if marginal_list.is_empty() {
        return Err(Error::EmptyInput("independent_joint"));
    }
    for (i, m) in marginal_list.iter().enumerate() {
        if m.is_empty() {
            return Err(Error::EmptyInput("independent_joint marginal"));
        }
        let s: f64 = m.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "marginal {i} sums to {s}, expected 1"
            )));
        }
        if m.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidParameter("marginals must be nonnegative".into()));
        }
    }
    let dims: Vec<usize> = marginal_list.iter().map(|m| m.len()).collect();
    let size: usize = dims.iter().product();
    let mut table = vec![1.0; size];
    let mut stride = size;
    for m in marginal_list {
        stride /= m.len();
        for (idx, cell) in table.iter_mut().enumerate() {
            *cell *= m[(idx / stride) % m.len()];
        }
    }
    let independent: u64 = dims.iter().map(|&k| k as u64).sum::<u64>() - dims.len() as u64;
    let full: u64 = dims.iter().map(|&k| k as u64).product::<u64>() - 1;
    Ok(IndependentJoint {
        dims,
        table,
        parameters: ParameterCount { independent, full },
    })
}
