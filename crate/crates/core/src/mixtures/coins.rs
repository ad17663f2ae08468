use serde::{Deserialize, Serialize};

use super::{EmOptions, EmTrace};
use crate::numerics::RngState;
use crate::util::log_sum_exp;
use crate::{Error, Result};

/// Two-coin mixture over toss triplets: coin 1 is picked with probability
/// `lambda` and lands heads (encoded `0`) with probability `p`; coin 2
/// lands heads with probability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinMixtureParams {
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
}

impl CoinMixtureParams {
    pub fn new(lambda: f64, p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("p", p), ("q", q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name}={v} outside [0,1]")));
            }
        }
        Ok(Self { lambda, p, q })
    }

    fn interior(&self) -> Result<()> {
        for (name, v) in [("lambda", self.lambda), ("p", self.p), ("q", self.q)] {
            if v <= 0.0 || v >= 1.0 {
                return Err(Error::BoundaryInit(format!(
                    "{name}={v} must be strictly inside (0,1)"
                )));
            }
        }
        Ok(())
    }
}

/// Log-probability of seeing `heads` heads in three tosses of a coin with
/// heads probability `p`, honoring `0 ln 0 = 0` at the boundary.
fn triple_log_prob(heads: u32, p: f64) -> f64 {
    let h = heads as f64;
    let t = 3.0 - h;
    let mut acc = 0.0;
    if h > 0.0 {
        acc += h * p.ln();
    }
    if t > 0.0 {
        acc += t * (1.0 - p).ln();
    }
    acc
}

fn heads_count(triplet: &[u8; 3]) -> Result<u32> {
    if triplet.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("tosses must be 0 (heads) or 1".into()));
    }
    Ok(triplet.iter().filter(|&&b| b == 0).count() as u32)
}

fn log_likelihood(counts: &[u32], theta: &CoinMixtureParams) -> f64 {
    counts
        .iter()
        .map(|&n| {
            log_sum_exp(&[
                theta.lambda.ln() + triple_log_prob(n, theta.p),
                (1.0 - theta.lambda).ln() + triple_log_prob(n, theta.q),
            ])
        })
        .sum()
}

/// Posterior responsibility of coin 1 for each observation.
fn responsibilities(counts: &[u32], theta: &CoinMixtureParams) -> Vec<f64> {
    counts
        .iter()
        .map(|&n| {
            let a = theta.lambda.ln() + triple_log_prob(n, theta.p);
            let b = (1.0 - theta.lambda).ln() + triple_log_prob(n, theta.q);
            let z = log_sum_exp(&[a, b]);
            (a - z).exp()
        })
        .collect()
}

/// Moment-based default start: both coins perturbed off the pooled heads
/// rate, mixing weight near one half.
pub fn default_coin_init(counts: &[u32], seed: u64) -> CoinMixtureParams {
    let mut rng = RngState::new(seed);
    let pooled = counts.iter().map(|&n| n as f64 / 3.0).sum::<f64>() / counts.len() as f64;
    let pooled = pooled.clamp(0.05, 0.95);
    let jitter = 0.1 + 0.15 * rng.next_f64();
    CoinMixtureParams {
        lambda: 0.4 + 0.2 * rng.next_f64(),
        p: (pooled + jitter).clamp(0.02, 0.98),
        q: (pooled - jitter).clamp(0.02, 0.98),
    }
}

/// EM for the two-coin mixture.
///
/// E-step: Bayes responsibilities for coin 1. M-step: `lambda` is the mean
/// responsibility over the sample, `p` and `q` are responsibility-weighted
/// heads rates. Stops when the log-likelihood gain drops below `opts.tol`.
pub fn em_coins(
    triplets: &[[u8; 3]],
    init: Option<CoinMixtureParams>,
    opts: &EmOptions,
) -> Result<(CoinMixtureParams, Vec<f64>, EmTrace)> {
    if triplets.is_empty() {
        return Err(Error::EmptyInput("em_coins"));
    }
    let counts: Vec<u32> = triplets.iter().map(heads_count).collect::<Result<_>>()?;
    let mut theta = match init {
        Some(t) => {
            t.interior()?;
            t
        }
        None => default_coin_init(&counts, opts.seed),
    };

    let m = counts.len() as f64;
    let mut trace = vec![log_likelihood(&counts, &theta)];
    let mut converged = false;
    let mut mu = responsibilities(&counts, &theta);
    for _ in 0..opts.max_iter {
        mu = responsibilities(&counts, &theta);
        let mu_sum: f64 = mu.iter().sum();
        let co_sum = m - mu_sum;
        let lambda = mu_sum / m;
        let p = if mu_sum > 0.0 {
            counts
                .iter()
                .zip(&mu)
                .map(|(&n, w)| (n as f64 / 3.0) * w)
                .sum::<f64>()
                / mu_sum
        } else {
            theta.p
        };
        let q = if co_sum > 0.0 {
            counts
                .iter()
                .zip(&mu)
                .map(|(&n, w)| (n as f64 / 3.0) * (1.0 - w))
                .sum::<f64>()
                / co_sum
        } else {
            theta.q
        };
        theta = CoinMixtureParams { lambda, p, q };
        let ll = log_likelihood(&counts, &theta);
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
        mu,
        EmTrace {
            log_likelihood: trace,
            iterations,
            converged,
        },
    ))
}
