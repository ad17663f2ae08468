use serde::{Deserialize, Serialize};

use super::{gram, kernel_eval, KernelSpec, SvmModel};
use crate::numerics::Matrix;
use crate::{Error, Result};

/// Snap width for multipliers sitting numerically on a box face.
const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainOptions {
    /// Convergence threshold on the largest KKT violation.
    pub tol: f64,
    /// Maximum number of passes (one pass = one pair update per training
    /// point). `None` uses ten passes per training point.
    pub max_passes: Option<usize>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_passes: None,
        }
    }
}

/// Per-pass diagnostics of the dual ascent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    /// Dual objective after each pass.
    pub dual_values: Vec<f64>,
    pub passes: usize,
    pub converged: bool,
    /// Worst `|sum_i y_i mu_i|` observed at any pass boundary.
    pub max_equality_violation: f64,
    /// Worst excursion of any multiplier outside `[0, nu]`.
    pub max_box_violation: f64,
}

/// A trained model together with the full multiplier vector over the
/// training set (needed to categorize non-support points) and the solver
/// trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmFit {
    pub model: SvmModel,
    /// One multiplier per training point, snapped to the box faces.
    pub multipliers: Vec<f64>,
    pub labels: Vec<f64>,
    pub dual_objective: f64,
    pub trace: SolverTrace,
    /// Set when no on-margin vector existed and the offset fell back to the
    /// midpoint of the feasible interval.
    pub b_from_midpoint: bool,
}

/// KKT category of a training point by its multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointCategory {
    /// `0 < mu < nu`: on the margin.
    OnMargin,
    /// `mu = nu`: margin error.
    MarginError,
    /// `mu = 0`: not a support vector.
    NonSupport,
}

/// Trains a soft-margin SVM by pairwise coordinate ascent on the dual:
/// each step analytically optimizes the maximal-KKT-violating pair subject
/// to the box `[0, nu]` and the equality constraint `sum y mu = 0`, so both
/// constraints hold exactly at every iteration.
pub fn train(
    points: &[Vec<f64>],
    labels: &[f64],
    spec: &KernelSpec,
    nu: f64,
    opts: &TrainOptions,
) -> Result<SvmFit> {
    let m = points.len();
    if m == 0 {
        return Err(Error::EmptyInput("svm train"));
    }
    if labels.len() != m {
        return Err(Error::Shape("one label per training point".into()));
    }
    if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
        return Err(Error::InvalidParameter("labels must be -1 or +1".into()));
    }
    if !labels.iter().any(|&y| y > 0.0) || !labels.iter().any(|&y| y < 0.0) {
        return Err(Error::DegenerateLabels);
    }
    if nu <= 0.0 {
        return Err(Error::InvalidParameter("nu must be positive".into()));
    }
    spec.validate()?;

    let k = gram(spec, points, None)?;
    let max_passes = opts.max_passes.unwrap_or(10 * m);

    let mut mu = vec![0.0; m];
    // Kernel expansion f_t = sum_s mu_s y_s K(s, t); errors E_t = f_t - y_t.
    let mut f = vec![0.0; m];
    let mut trace = SolverTrace {
        dual_values: vec![0.0],
        passes: 0,
        converged: false,
        max_equality_violation: 0.0,
        max_box_violation: 0.0,
    };

    'outer: for _pass in 0..max_passes {
        for _step in 0..m {
            let Some((i, j, violation)) = select_violating_pair(&mu, labels, &f, nu) else {
                trace.converged = true;
                break 'outer;
            };
            if violation <= opts.tol {
                trace.converged = true;
                break 'outer;
            }
            let e_i = f[i] - labels[i];
            let e_j = f[j] - labels[j];
            let s = labels[i] * labels[j];
            let (lo, hi) = if s < 0.0 {
                ((mu[j] - mu[i]).max(0.0), (nu + mu[j] - mu[i]).min(nu))
            } else {
                ((mu[i] + mu[j] - nu).max(0.0), (mu[i] + mu[j]).min(nu))
            };
            if hi - lo <= 0.0 {
                continue;
            }
            let eta = k.get(i, i) + k.get(j, j) - 2.0 * k.get(i, j);
            let old_j = mu[j];
            let new_j = if eta > 1e-12 {
                (old_j + labels[j] * (e_i - e_j) / eta).clamp(lo, hi)
            } else {
                // Flat direction: the dual is linear on the segment, so the
                // improving endpoint is decided by the slope's sign.
                if labels[j] * (e_i - e_j) > 0.0 {
                    hi
                } else {
                    lo
                }
            };
            if (new_j - old_j).abs() < 1e-15 {
                continue;
            }
            let old_i = mu[i];
            let new_i = old_i + s * (old_j - new_j);
            mu[j] = new_j;
            mu[i] = new_i;
            let di = (new_i - old_i) * labels[i];
            let dj = (new_j - old_j) * labels[j];
            for (t, ft) in f.iter_mut().enumerate() {
                *ft += di * k.get(i, t) + dj * k.get(j, t);
            }
        }
        trace.passes += 1;
        trace.dual_values.push(dual_objective(&mu, labels, &f));
        let eq: f64 = mu.iter().zip(labels).map(|(a, y)| a * y).sum();
        trace.max_equality_violation = trace.max_equality_violation.max(eq.abs());
        let box_violation = mu
            .iter()
            .map(|&a| (-a).max(a - nu).max(0.0))
            .fold(0.0, f64::max);
        trace.max_box_violation = trace.max_box_violation.max(box_violation);
    }
    if trace.dual_values.len() == 1 || trace.converged {
        trace.dual_values.push(dual_objective(&mu, labels, &f));
    }

    // Snap face-adjacent multipliers for deterministic categorization.
    for a in mu.iter_mut() {
        if a.abs() <= SNAP {
            *a = 0.0;
        } else if (*a - nu).abs() <= SNAP * (1.0 + nu) {
            *a = nu;
        }
    }

    // Offset from the on-margin vectors: b = f_t - y_t there.
    let free: Vec<usize> = (0..m).filter(|&t| mu[t] > 0.0 && mu[t] < nu).collect();
    let (b, b_from_midpoint) = if free.is_empty() {
        // Feasible interval for b from the bound points.
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for t in 0..m {
            let bound = f[t] - labels[t];
            let is_lower = (labels[t] > 0.0 && mu[t] >= nu) || (labels[t] < 0.0 && mu[t] <= 0.0);
            if is_lower {
                lower = lower.max(bound);
            } else {
                upper = upper.min(bound);
            }
        }
        let b = if lower.is_finite() && upper.is_finite() {
            0.5 * (lower + upper)
        } else if lower.is_finite() {
            lower
        } else {
            upper
        };
        (b, true)
    } else {
        let sum: f64 = free.iter().map(|&t| f[t] - labels[t]).sum();
        (sum / free.len() as f64, false)
    };

    let dual = dual_objective(&mu, labels, &f);
    let support: Vec<usize> = (0..m).filter(|&t| mu[t] > 0.0).collect();
    let model = SvmModel {
        support_vectors: support.iter().map(|&t| points[t].clone()).collect(),
        support_labels: support.iter().map(|&t| labels[t]).collect(),
        support_multipliers: support.iter().map(|&t| mu[t]).collect(),
        offset: b,
        kernel: *spec,
        nu,
    };
    Ok(SvmFit {
        model,
        multipliers: mu,
        labels: labels.to_vec(),
        dual_objective: dual,
        trace,
        b_from_midpoint,
    })
}

/// Maximal violating pair: `i` over the up-set, `j` over the down-set,
/// measured by the error terms `E_t = f_t - y_t`. Returns `None` when
/// either index set is empty (fully bound solution).
fn select_violating_pair(
    mu: &[f64],
    labels: &[f64],
    f: &[f64],
    nu: f64,
) -> Option<(usize, usize, f64)> {
    let mut best_i: Option<(usize, f64)> = None;
    let mut best_j: Option<(usize, f64)> = None;
    for t in 0..mu.len() {
        let e = f[t] - labels[t];
        let in_up = (labels[t] > 0.0 && mu[t] < nu) || (labels[t] < 0.0 && mu[t] > 0.0);
        let in_low = (labels[t] > 0.0 && mu[t] > 0.0) || (labels[t] < 0.0 && mu[t] < nu);
        if in_up && best_i.map_or(true, |(_, be)| e < be) {
            best_i = Some((t, e));
        }
        if in_low && best_j.map_or(true, |(_, be)| e > be) {
            best_j = Some((t, e));
        }
    }
    match (best_i, best_j) {
        (Some((i, ei)), Some((j, ej))) => Some((i, j, ej - ei)),
        _ => None,
    }
}

fn dual_objective(mu: &[f64], labels: &[f64], f: &[f64]) -> f64 {
    // theta = sum mu - 1/2 mu' M mu, and (M mu)_t = y_t f_t.
    let linear: f64 = mu.iter().sum();
    let quadratic: f64 = mu
        .iter()
        .zip(labels)
        .zip(f)
        .map(|((a, y), ft)| a * y * ft)
        .sum();
    linear - 0.5 * quadratic
}

/// Tags every training point by its KKT role.
pub fn categorize(fit: &SvmFit) -> Vec<PointCategory> {
    fit.multipliers
        .iter()
        .map(|&a| {
            if a <= 0.0 {
                PointCategory::NonSupport
            } else if a >= fit.model.nu {
                PointCategory::MarginError
            } else {
                PointCategory::OnMargin
            }
        })
        .collect()
}

/// Recomputes the kernel expansion of a model at a point (without offset).
pub(crate) fn expansion(model: &SvmModel, x: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for ((sv, &y), &a) in model
        .support_vectors
        .iter()
        .zip(&model.support_labels)
        .zip(&model.support_multipliers)
    {
        acc += a * y * kernel_eval(&model.kernel, sv, x)?;
    }
    Ok(acc)
}

pub(crate) fn gram_for_model(model: &SvmModel) -> Result<Matrix> {
    gram(
        &model.kernel,
        &model.support_vectors,
        Some(&model.support_labels),
    )
}
