//! Expectation-maximization over mixtures: the generic Jensen lower bound
//! plus three concrete models — a two-coin Bernoulli mixture over toss
//! triplets, an isotropic Gaussian mixture, and a multinomial mixture over
//! word/document co-occurrence counts.
//!
//! Every fit is deterministic given its seed, accumulates likelihoods in the
//! log domain, and records a per-iteration log-likelihood trace whose
//! monotone ascent is asserted by the test suites.

mod bound;
mod coins;
mod gmm;
mod plsa;

pub use bound::{em_lower_bound, marginal_log_likelihood};
pub use coins::{em_coins, CoinMixtureParams};
pub use gmm::{em_gmm, GaussianMixtureParams};
pub use plsa::{em_plsa, MultinomialMixtureParams, PlsaFit};

use serde::{Deserialize, Serialize};

/// Stopping parameters shared by the EM fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmOptions {
    /// Stop once the log-likelihood gain falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Seed for default initialization.
    pub seed: u64,
}

impl Default for EmOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 500,
            seed: 0,
        }
    }
}

/// Per-iteration log-likelihood trace of an EM run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmTrace {
    /// Log-likelihood after each iteration, starting with the initial model.
    pub log_likelihood: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl EmTrace {
    /// Largest single-step decrease of the trace (0 for a monotone run).
    pub fn worst_decrease(&self) -> f64 {
        self.log_likelihood
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }
}
