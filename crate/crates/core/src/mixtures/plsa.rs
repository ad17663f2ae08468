use serde::{Deserialize, Serialize};

use super::{EmOptions, EmTrace};
use crate::numerics::{Matrix, RngState};
use crate::{Error, Result};

/// Multinomial mixture over word/document co-occurrences: `k` topics with
/// weights `lambda`, per-topic word distributions `u` and document
/// distributions `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialMixtureParams {
    pub lambda: Vec<f64>,
    /// `k` rows of length `n` (words); each sums to one.
    pub word_dists: Vec<Vec<f64>>,
    /// `k` rows of length `m` (documents); each sums to one.
    pub doc_dists: Vec<Vec<f64>>,
}

impl MultinomialMixtureParams {
    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    fn validate(&self, n: usize, m: usize) -> Result<()> {
        let k = self.k();
        if k == 0 {
            return Err(Error::EmptyInput("plsa init"));
        }
        if self.word_dists.len() != k || self.doc_dists.len() != k {
            return Err(Error::Shape("init topic counts disagree".into()));
        }
        if self.word_dists.iter().any(|u| u.len() != n)
            || self.doc_dists.iter().any(|v| v.len() != m)
        {
            return Err(Error::Shape("init distributions have the wrong length".into()));
        }
        let check_simplex = |vals: &[f64], what: &str| -> Result<()> {
            if vals.iter().any(|&x| x < 0.0) {
                return Err(Error::InvalidParameter(format!("{what} has negative mass")));
            }
            let s: f64 = vals.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!("{what} sums to {s}")));
            }
            Ok(())
        };
        check_simplex(&self.lambda, "lambda")?;
        for (j, u) in self.word_dists.iter().enumerate() {
            check_simplex(u, &format!("word distribution {j}"))?;
        }
        for (j, v) in self.doc_dists.iter().enumerate() {
            check_simplex(v, &format!("document distribution {j}"))?;
        }
        Ok(())
    }
}

/// Result of a multinomial-mixture fit, including the word/document indices
/// that carried no mass and were pruned from the updates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlsaFit {
    pub params: MultinomialMixtureParams,
    pub trace: EmTrace,
    pub pruned_words: Vec<usize>,
    pub pruned_docs: Vec<usize>,
}

/// Seeded positive noise around uniform, normalized per simplex.
pub fn default_plsa_init(n: usize, m: usize, k: usize, seed: u64) -> MultinomialMixtureParams {
    let mut rng = RngState::new(seed);
    let mut noisy_simplex = |len: usize| -> Vec<f64> {
        let raw: Vec<f64> = (0..len).map(|_| 1.0 + 0.2 * rng.next_f64()).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / z).collect()
    };
    MultinomialMixtureParams {
        lambda: noisy_simplex(k),
        word_dists: (0..k).map(|_| noisy_simplex(n)).collect(),
        doc_dists: (0..k).map(|_| noisy_simplex(m)).collect(),
    }
}

fn scaled_log_likelihood(g: &Matrix, theta: &MultinomialMixtureParams) -> f64 {
    let (n, m) = (g.rows(), g.cols());
    let mut ll = 0.0;
    for r in 0..n {
        for s in 0..m {
            let w = g.get(r, s);
            if w <= 0.0 {
                continue;
            }
            let p: f64 = (0..theta.k())
                .map(|j| theta.lambda[j] * theta.word_dists[j][r] * theta.doc_dists[j][s])
                .sum();
            ll += w * p.ln();
        }
    }
    ll
}

/// EM for the multinomial mixture (bag-of-words / topic model).
///
/// The co-occurrence matrix is scaled to total mass one. The E-step assigns
/// each observed (word, document) cell its topic responsibilities; the
/// M-step re-estimates `lambda`, `u`, and `v` from count-weighted
/// responsibility sums, which keeps every simplex constraint satisfied
/// without clipping. All-zero rows or columns are pruned from the updates
/// and reported in the fit.
pub fn em_plsa(
    g: &Matrix,
    k: usize,
    init: Option<MultinomialMixtureParams>,
    opts: &EmOptions,
) -> Result<PlsaFit> {
    let (n, m) = (g.rows(), g.cols());
    if n == 0 || m == 0 {
        return Err(Error::EmptyInput("em_plsa"));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if g.entries().iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidParameter("counts must be nonnegative".into()));
    }
    let total: f64 = g.entries().iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    let g = g.scale(1.0 / total);

    let pruned_words: Vec<usize> = (0..n)
        .filter(|&r| (0..m).all(|s| g.get(r, s) == 0.0))
        .collect();
    let pruned_docs: Vec<usize> = (0..m)
        .filter(|&s| (0..n).all(|r| g.get(r, s) == 0.0))
        .collect();

    let mut theta = match init {
        Some(t) => {
            t.validate(n, m)?;
            t
        }
        None => default_plsa_init(n, m, k, opts.seed),
    };

    let mut trace = vec![scaled_log_likelihood(&g, &theta)];
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let mut lambda_acc = vec![0.0; k];
        let mut u_acc = vec![vec![0.0; n]; k];
        let mut v_acc = vec![vec![0.0; m]; k];
        for r in 0..n {
            for s in 0..m {
                let w = g.get(r, s);
                if w <= 0.0 {
                    continue;
                }
                let joint: Vec<f64> = (0..k)
                    .map(|j| theta.lambda[j] * theta.word_dists[j][r] * theta.doc_dists[j][s])
                    .collect();
                let z: f64 = joint.iter().sum();
                if z <= 0.0 {
                    return Err(Error::NoConvergence(
                        "em_plsa",
                        format!("cell ({r},{s}) has zero mass under every topic"),
                    ));
                }
                for j in 0..k {
                    let resp = w * joint[j] / z;
                    lambda_acc[j] += resp;
                    u_acc[j][r] += resp;
                    v_acc[j][s] += resp;
                }
            }
        }
        for j in 0..k {
            let mass = lambda_acc[j];
            if mass > 0.0 {
                for x in u_acc[j].iter_mut() {
                    *x /= mass;
                }
                for x in v_acc[j].iter_mut() {
                    *x /= mass;
                }
            } else {
                // A topic that lost all mass keeps its previous shape.
                u_acc[j] = theta.word_dists[j].clone();
                v_acc[j] = theta.doc_dists[j].clone();
            }
        }
        theta = MultinomialMixtureParams {
            lambda: lambda_acc,
            word_dists: u_acc,
            doc_dists: v_acc,
        };
        let ll = scaled_log_likelihood(&g, &theta);
        let gain = ll - trace.last().unwrap();
        trace.push(ll);
        if gain.abs() < opts.tol {
            converged = true;
            break;
        }
    }
    let iterations = trace.len() - 1;
    Ok(PlsaFit {
        params: theta,
        trace: EmTrace {
            log_likelihood: trace,
            iterations,
            converged,
        },
        pruned_words,
        pruned_docs,
    })
}
