use serde::{Deserialize, Serialize};

use super::solver::{expansion, gram_for_model, SvmFit};
use super::KernelSpec;
use crate::{Error, Result};

/// Trained support-vector machine: the retained support vectors (points
/// with positive multiplier), their labels and multipliers, the offset,
/// and the kernel. `sum y_i mu_i = 0` holds over the retained set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support_vectors: Vec<Vec<f64>>,
    pub support_labels: Vec<f64>,
    pub support_multipliers: Vec<f64>,
    pub offset: f64,
    pub kernel: KernelSpec,
    pub nu: f64,
}

impl SvmModel {
    pub fn support_count(&self) -> usize {
        self.support_vectors.len()
    }
}

/// Kernel-expansion classification:
/// `sign( sum_i mu_i y_i k(x_i, x) - b )`, with an exact zero mapping to
/// `+1`. Returns the label and the raw decision value.
pub fn classify(model: &SvmModel, x: &[f64]) -> Result<(i8, f64)> {
    let raw = expansion(model, x)? - model.offset;
    Ok((if raw >= 0.0 { 1 } else { -1 }, raw))
}

/// Primal and dual objective values of a trained model over its training
/// set, and their gap. Strong duality makes the gap vanish for a converged
/// fit; weak duality keeps it nonnegative regardless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

/// Evaluates `primal = ||w||^2/2 + nu * sum eps` with
/// `eps_t = max(0, 1 - y_t (f(x_t) - b))`, and `dual = sum mu - mu'Mmu/2`.
pub fn duality_report(fit: &SvmFit, points: &[Vec<f64>], labels: &[f64]) -> Result<DualityReport> {
    if points.len() != labels.len() {
        return Err(Error::Shape("one label per point".into()));
    }
    let model = &fit.model;
    // ||w||^2 = mu' M mu over the support set.
    let m_support = gram_for_model(model)?;
    let mut w_norm_sq = 0.0;
    for i in 0..model.support_count() {
        for j in 0..model.support_count() {
            w_norm_sq +=
                model.support_multipliers[i] * model.support_multipliers[j] * m_support.get(i, j);
        }
    }
    let mut slack_sum = 0.0;
    for (x, &y) in points.iter().zip(labels) {
        let f = expansion(model, x)? - model.offset;
        slack_sum += (1.0 - y * f).max(0.0);
    }
    let primal = 0.5 * w_norm_sq + model.nu * slack_sum;
    let linear: f64 = fit.multipliers.iter().sum();
    let dual = linear - 0.5 * w_norm_sq;
    Ok(DualityReport {
        primal,
        dual,
        gap: primal - dual,
    })
}
