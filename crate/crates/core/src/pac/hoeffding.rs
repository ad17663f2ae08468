use serde::{Deserialize, Serialize};

use crate::numerics::RngState;
use crate::{Error, Result};

/// Empirical check of the two-sided deviation bound
/// `P(|mean - p| >= eps) <= 2 exp(-2 eps^2 m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingReport {
    pub true_p: f64,
    pub m: usize,
    pub trials: usize,
    pub eps: f64,
    /// Fraction of trials whose sample mean deviated by at least `eps`.
    pub exceedance_rate: f64,
    /// The closed-form bound `2 exp(-2 eps^2 m)`.
    pub bound: f64,
    /// Binomial standard error of the rate estimate at the bound value.
    pub std_error: f64,
}

impl HoeffdingReport {
    /// The assertable comparison: rate within three standard errors of the
    /// bound (from above).
    pub fn within_bound(&self) -> bool {
        self.exceedance_rate <= self.bound + 3.0 * self.std_error
    }
}

/// Simulates `trials` samples of `m` Bernoulli(`true_p`) draws and counts
/// how often the sample mean deviates from `true_p` by at least `eps`.
pub fn hoeffding_check(
    true_p: f64,
    m: usize,
    trials: usize,
    eps: f64,
    seed: u64,
) -> Result<HoeffdingReport> {
    if !(0.0..=1.0).contains(&true_p) {
        return Err(Error::InvalidParameter("true_p must lie in [0,1]".into()));
    }
    if m == 0 || trials == 0 {
        return Err(Error::InvalidParameter("m and trials must be positive".into()));
    }
    if eps <= 0.0 {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let base = RngState::new(seed);
    let mut exceedances = 0usize;
    for trial in 0..trials {
        let mut rng = base.derive(trial as u64);
        let mut heads = 0usize;
        for _ in 0..m {
            if rng.next_f64() < true_p {
                heads += 1;
            }
        }
        let mean = heads as f64 / m as f64;
        if (mean - true_p).abs() >= eps {
            exceedances += 1;
        }
    }
    let bound = 2.0 * (-2.0 * eps * eps * m as f64).exp();
    let p_est = bound.min(1.0);
    let std_error = (p_est * (1.0 - p_est) / trials as f64).sqrt();
    Ok(HoeffdingReport {
        true_p,
        m,
        trials,
        eps,
        exceedance_rate: exceedances as f64 / trials as f64,
        bound,
        std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impossible_deviation_never_occurs() {
        let r = hoeffding_check(0.5, 2, 500, 1.0, 3).unwrap();
        assert_eq!(r.exceedance_rate, 0.0);
    }

    #[test]
    fn fair_coin_hundred_tosses() {
        let r = hoeffding_check(0.5, 100, 10_000, 0.2, 7).unwrap();
        assert!(r.within_bound(), "rate {} bound {}", r.exceedance_rate, r.bound);
        assert!(r.exceedance_rate <= 0.005);
    }

    #[test]
    fn degenerate_coin_never_deviates() {
        let r = hoeffding_check(0.0, 50, 200, 0.05, 5).unwrap();
        assert_eq!(r.exceedance_rate, 0.0);
        let r = hoeffding_check(1.0, 50, 200, 0.05, 5).unwrap();
        assert_eq!(r.exceedance_rate, 0.0);
    }

    #[test]
    fn rates_respect_the_bound_across_settings() {
        for (p, m, eps, seed) in [
            (0.3, 60, 0.15, 11u64),
            (0.5, 40, 0.25, 12),
            (0.8, 120, 0.1, 13),
        ] {
            let r = hoeffding_check(p, m, 4000, eps, seed).unwrap();
            assert!(
                r.within_bound(),
                "p={p} m={m} eps={eps}: rate {} vs bound {}",
                r.exceedance_rate,
                r.bound
            );
        }
    }
}
