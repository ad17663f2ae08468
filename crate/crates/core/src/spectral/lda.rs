use serde::{Deserialize, Serialize};

use super::pca::{center_of, centered_columns};
use crate::numerics::{canonical_sign, solve_spd, sym_eig, Matrix};
use crate::{Error, Result};

/// Two-class Fisher discriminant: unit direction, decision offset, class
/// means, and the within-class scatter it was built from. The decision
/// value is `w'x - offset`; positive values side with class 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub direction: Vec<f64>,
    pub offset: f64,
    pub mean1: Vec<f64>,
    pub mean2: Vec<f64>,
    pub within_scatter: Matrix,
    /// Set when the within-scatter needed a ridge to become invertible.
    pub regularized: bool,
}

impl LdaModel {
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.direction.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - self.offset
    }
}

/// Sum of per-class scaled covariance matrices `(1/l_j) A_j A_j'`.
fn within_scatter(classes: &[&[Vec<f64>]], dim: usize) -> Result<Matrix> {
    let mut sw = Matrix::zeros(dim, dim);
    for class in classes {
        if class.is_empty() {
            return Err(Error::EmptyInput("lda class"));
        }
        let mean = center_of(class);
        let a = centered_columns(class, &mean)?;
        sw = sw.add(&a.matmul(&a.transpose())?.scale(1.0 / class.len() as f64))?;
    }
    Ok(sw)
}

/// Solves `S x = b`, falling back to a ridge `S + eps I` with
/// `eps = 1e-8 trace(S)/n` when the scatter is singular.
fn solve_scatter(s: &Matrix, b: &[f64]) -> Result<(Vec<f64>, Matrix, bool)> {
    match solve_spd(s, b) {
        Ok(x) => Ok((x, s.clone(), false)),
        Err(Error::NotPositiveDefinite { .. }) => {
            let n = s.rows();
            let eps = 1e-8 * s.trace().max(1e-12) / n as f64;
            let ridged = s.add(&Matrix::identity(n).scale(eps))?;
            let x = solve_spd(&ridged, b)?;
            Ok((x, ridged, true))
        }
        Err(e) => Err(e),
    }
}

/// Two-class Fisher linear discriminant: direction `S_w^{-1}(mu1 - mu2)`
/// normalized to unit length, boundary through the midpoint of the means.
pub fn lda2(class1: &[Vec<f64>], class2: &[Vec<f64>]) -> Result<LdaModel> {
    if class1.is_empty() || class2.is_empty() {
        return Err(Error::EmptyInput("lda2"));
    }
    let dim = class1[0].len();
    if dim == 0
        || class1.iter().any(|p| p.len() != dim)
        || class2.iter().any(|p| p.len() != dim)
    {
        return Err(Error::Shape("classes must share a nonzero dimension".into()));
    }
    let mean1 = center_of(class1);
    let mean2 = center_of(class2);
    let sw = within_scatter(&[class1, class2], dim)?;
    let diff: Vec<f64> = mean1.iter().zip(&mean2).map(|(a, b)| a - b).collect();
    let (w_raw, scatter_used, regularized) = solve_scatter(&sw, &diff)?;
    let norm = w_raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= 0.0 {
        return Err(Error::InvalidParameter(
            "identical class means with singular scatter".into(),
        ));
    }
    let direction: Vec<f64> = w_raw.iter().map(|v| v / norm).collect();
    let mid: Vec<f64> = mean1
        .iter()
        .zip(&mean2)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let offset = mid.iter().zip(&direction).map(|(m, w)| m * w).sum();
    Ok(LdaModel {
        direction,
        offset,
        mean1,
        mean2,
        within_scatter: scatter_used,
        regularized,
    })
}

/// Multi-class discriminant axes with their Rayleigh-quotient values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaAxes {
    /// `n x q` axes (columns), each normalized to unit length.
    pub axes: Matrix,
    /// Generalized eigenvalues (between/within ratios), descending.
    pub values: Vec<f64>,
    /// True when more axes were requested than classes - 1 and the result
    /// was truncated.
    pub truncated: bool,
    pub regularized: bool,
}

/// Multi-class Fisher axes by symmetric whitening: eigenvectors of
/// `S_w^{-1/2} S_b S_w^{-1/2}` mapped back through `S_w^{-1/2}`, which
/// keeps the problem symmetric and the solutions real. At most
/// `classes - 1` informative axes exist; asking for more truncates.
pub fn lda_general(classes: &[Vec<Vec<f64>>], q: usize) -> Result<LdaAxes> {
    if classes.len() < 2 {
        return Err(Error::EmptyInput("lda_general needs at least two classes"));
    }
    if classes.iter().any(|c| c.is_empty()) {
        return Err(Error::EmptyInput("lda class"));
    }
    let dim = classes[0][0].len();
    if classes
        .iter()
        .any(|c| c.iter().any(|p| p.len() != dim))
        || dim == 0
    {
        return Err(Error::Shape("classes must share a nonzero dimension".into()));
    }
    let max_axes = classes.len() - 1;
    let truncated = q > max_axes;
    let q_eff = q.min(max_axes).max(1);

    let class_refs: Vec<&[Vec<f64>]> = classes.iter().map(|c| c.as_slice()).collect();
    let sw = within_scatter(&class_refs, dim)?;
    // Between scatter from the class centers around the global center.
    let all: Vec<Vec<f64>> = classes.iter().flatten().cloned().collect();
    let global = center_of(&all);
    let center_cols: Vec<Vec<f64>> = classes
        .iter()
        .map(|c| {
            center_of(c)
                .iter()
                .zip(&global)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    let b = Matrix::from_columns(&center_cols)?;
    let sb = b.matmul(&b.transpose())?.scale(1.0 / classes.len() as f64);

    // Inverse square root of the (possibly ridged) within scatter.
    let (ridged, regularized) = match crate::numerics::cholesky(&sw) {
        Ok(_) => (sw.clone(), false),
        Err(_) => {
            let eps = 1e-8 * sw.trace().max(1e-12) / dim as f64;
            (sw.add(&Matrix::identity(dim).scale(eps))?, true)
        }
    };
    let eig_w = sym_eig(&ridged, 1e-12)?;
    let inv_sqrt_vals: Vec<f64> = eig_w
        .eigenvalues
        .iter()
        .map(|&l| 1.0 / l.max(1e-300).sqrt())
        .collect();
    let w_inv_sqrt = eig_w
        .eigenvectors
        .matmul(&Matrix::diag(&inv_sqrt_vals))?
        .matmul(&eig_w.eigenvectors.transpose())?;

    let whitened = w_inv_sqrt.matmul(&sb)?.matmul(&w_inv_sqrt)?;
    let eig_b = sym_eig(&whitened, 1e-12)?;

    let mut axes = Vec::with_capacity(q_eff);
    for j in 0..q_eff {
        let e = eig_b.eigenvectors.column(j);
        let mut axis = w_inv_sqrt.matvec(&e)?;
        let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in axis.iter_mut() {
            *v /= norm;
        }
        canonical_sign(&mut axis);
        axes.push(axis);
    }
    Ok(LdaAxes {
        axes: Matrix::from_columns(&axes)?,
        values: eig_b.eigenvalues[..q_eff].to_vec(),
        truncated,
        regularized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngState;

    fn blob(rng: &mut RngState, center: &[f64], n: usize, noise: f64) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| {
                center
                    .iter()
                    .map(|c| c + noise * rng.next_normal())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn isotropic_classes_align_with_mean_difference() {
        let mut rng = RngState::new(50);
        let c1 = blob(&mut rng, &[3.0, 0.0], 200, 1.0);
        let c2 = blob(&mut rng, &[-3.0, 0.0], 200, 1.0);
        let model = lda2(&c1, &c2).unwrap();
        // Direction should be close to (1, 0).
        assert!(model.direction[0].abs() > 0.99, "{:?}", model.direction);
    }

    #[test]
    fn hand_evaluated_direction() {
        // Construct classes with exactly S_w = diag(4, 1) ... directly test
        // the algebra through the shared solver instead: w ~ S_w^{-1} diff.
        let sw = Matrix::diag(&[4.0, 1.0]);
        let diff = [2.0, 0.0];
        let w = solve_spd(&sw, &diff).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-12);
        assert!(w[1].abs() < 1e-12);
    }

    #[test]
    fn decision_scale_invariance() {
        let mut rng = RngState::new(51);
        let c1 = blob(&mut rng, &[1.0, 2.0], 30, 0.7);
        let c2 = blob(&mut rng, &[-1.0, -1.0], 30, 0.7);
        let model = lda2(&c1, &c2).unwrap();
        let scaled1: Vec<Vec<f64>> = c1.iter().map(|p| vec![3.0 * p[0], 3.0 * p[1]]).collect();
        let scaled2: Vec<Vec<f64>> = c2.iter().map(|p| vec![3.0 * p[0], 3.0 * p[1]]).collect();
        let scaled_model = lda2(&scaled1, &scaled2).unwrap();
        for p in c1.iter().chain(&c2) {
            let sp = vec![3.0 * p[0], 3.0 * p[1]];
            assert_eq!(
                model.decision_value(p) > 0.0,
                scaled_model.decision_value(&sp) > 0.0
            );
        }
    }

    #[test]
    fn agreement_with_normal_boundary() {
        use crate::probability::{two_class_normal_boundary, CovarianceMode, GaussianParams};
        let mut rng = RngState::new(52);
        let c1 = blob(&mut rng, &[2.0, 1.0, -1.0], 40, 1.3);
        let c2 = blob(&mut rng, &[-1.0, 0.0, 2.0], 40, 1.3);
        let model = lda2(&c1, &c2).unwrap();
        let g1 = GaussianParams {
            mean: model.mean1.clone(),
            covariance: model.within_scatter.clone(),
            mode: CovarianceMode::Full,
            singular: false,
        };
        let g2 = GaussianParams {
            mean: model.mean2.clone(),
            covariance: model.within_scatter.clone(),
            mode: CovarianceMode::Full,
            singular: false,
        };
        let boundary = two_class_normal_boundary(&g1, &g2).unwrap().normalized();
        for (a, b) in model.direction.iter().zip(&boundary.w) {
            assert!((a - b).abs() < 1e-9, "{:?} vs {:?}", model.direction, boundary.w);
        }
        assert!((model.offset - boundary.offset).abs() < 1e-9);
    }

    #[test]
    fn general_reduces_to_two_class() {
        let mut rng = RngState::new(53);
        let c1 = blob(&mut rng, &[2.0, 0.0], 25, 0.8);
        let c2 = blob(&mut rng, &[-2.0, 1.0], 25, 0.8);
        let two = lda2(&c1, &c2).unwrap();
        let multi = lda_general(&[c1, c2], 1).unwrap();
        let axis = multi.axes.column(0);
        let dot: f64 = axis.iter().zip(&two.direction).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-6, "|dot|={}", dot.abs());
    }

    #[test]
    fn collinear_means_leave_one_informative_axis() {
        let mut rng = RngState::new(54);
        let c1 = blob(&mut rng, &[-4.0, 0.0], 30, 0.5);
        let c2 = blob(&mut rng, &[0.0, 0.0], 30, 0.5);
        let c3 = blob(&mut rng, &[4.0, 0.0], 30, 0.5);
        let axes = lda_general(&[c1, c2, c3], 2).unwrap();
        assert!(axes.values[0] > 100.0 * axes.values[1].abs().max(1e-12));
    }

    #[test]
    fn returned_axis_maximizes_rayleigh_quotient() {
        let mut rng = RngState::new(55);
        let classes = vec![
            blob(&mut rng, &[2.0, 0.0, 0.0], 20, 0.9),
            blob(&mut rng, &[-1.0, 2.0, 0.5], 20, 0.9),
            blob(&mut rng, &[0.0, -2.0, -0.5], 20, 0.9),
        ];
        let class_refs: Vec<&[Vec<f64>]> = classes.iter().map(|c| c.as_slice()).collect();
        let sw = within_scatter(&class_refs, 3).unwrap();
        let all: Vec<Vec<f64>> = classes.iter().flatten().cloned().collect();
        let global = center_of(&all);
        let cols: Vec<Vec<f64>> = classes
            .iter()
            .map(|c| center_of(c).iter().zip(&global).map(|(a, b)| a - b).collect())
            .collect();
        let b = Matrix::from_columns(&cols).unwrap();
        let sb = b.matmul(&b.transpose()).unwrap().scale(1.0 / 3.0);
        let rayleigh = |w: &[f64]| -> f64 {
            let num: f64 = sb
                .matvec(w)
                .unwrap()
                .iter()
                .zip(w)
                .map(|(a, b)| a * b)
                .sum();
            let den: f64 = sw
                .matvec(w)
                .unwrap()
                .iter()
                .zip(w)
                .map(|(a, b)| a * b)
                .sum();
            num / den
        };
        let result = lda_general(&classes, 1).unwrap();
        let best = rayleigh(&result.axes.column(0));
        for _ in 0..100 {
            let w: Vec<f64> = (0..3).map(|_| rng.next_normal()).collect();
            assert!(rayleigh(&w) <= best + 1e-9);
        }
    }

    #[test]
    fn truncation_flag() {
        let mut rng = RngState::new(56);
        let c1 = blob(&mut rng, &[1.0, 0.0], 10, 0.5);
        let c2 = blob(&mut rng, &[-1.0, 0.0], 10, 0.5);
        let axes = lda_general(&[c1, c2], 2).unwrap();
        assert!(axes.truncated);
        assert_eq!(axes.axes.cols(), 1);
    }

    #[test]
    fn singular_scatter_gets_ridged() {
        // One-point classes have zero scatter.
        let model = lda2(&[vec![1.0, 0.0]], &[vec![-1.0, 0.0]]).unwrap();
        assert!(model.regularized);
        assert!(model.direction[0] > 0.99);
    }
}
