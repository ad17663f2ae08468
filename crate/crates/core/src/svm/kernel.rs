use serde::{Deserialize, Serialize};

use crate::numerics::Matrix;
use crate::{Error, Result};

/// Kernel families. Polynomial kernels use `(x'y)^d` and `(x'y + theta)^d`;
/// the radial basis function is `exp(-||x - y||^2 / (2 sigma^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelSpec {
    Linear,
    PolyHomogeneous { degree: u32 },
    PolyInhomogeneous { degree: u32, theta: f64 },
    Rbf { sigma: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::PolyHomogeneous { degree } => {
                if degree == 0 {
                    Err(Error::InvalidParameter("degree must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
            KernelSpec::PolyInhomogeneous { degree, theta } => {
                if degree == 0 {
                    Err(Error::InvalidParameter("degree must be at least 1".into()))
                } else if theta < 0.0 {
                    Err(Error::InvalidParameter("theta must be nonnegative".into()))
                } else {
                    Ok(())
                }
            }
            KernelSpec::Rbf { sigma } => {
                if sigma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("sigma must be positive".into()))
                }
            }
        }
    }
}

/// Evaluates the kernel on a pair of equal-dimension vectors.
pub fn kernel_eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "kernel arguments differ in dimension: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    spec.validate()?;
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok(match *spec {
        KernelSpec::Linear => dot,
        KernelSpec::PolyHomogeneous { degree } => dot.powi(degree as i32),
        KernelSpec::PolyInhomogeneous { degree, theta } => (dot + theta).powi(degree as i32),
        KernelSpec::Rbf { sigma } => {
            let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            (-sq / (2.0 * sigma * sigma)).exp()
        }
    })
}

/// Gram matrix `K_ij = k(x_i, x_j)`, or the label-scaled form
/// `M_ij = y_i y_j k(x_i, x_j)` when labels are supplied.
pub fn gram(spec: &KernelSpec, points: &[Vec<f64>], labels: Option<&[f64]>) -> Result<Matrix> {
    if points.is_empty() {
        return Err(Error::EmptyInput("gram"));
    }
    if let Some(y) = labels {
        if y.len() != points.len() {
            return Err(Error::Shape("one label per point".into()));
        }
    }
    let m = points.len();
    let mut k = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let mut v = kernel_eval(spec, &points[i], &points[j])?;
            if let Some(y) = labels {
                v *= y[i] * y[j];
            }
            k.set(i, j, v);
            k.set(j, i, v);
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sym_eig, RngState};

    #[test]
    fn rbf_self_similarity_is_one() {
        let spec = KernelSpec::Rbf { sigma: 0.7 };
        let x = [1.0, -2.0, 3.0];
        assert_eq!(kernel_eval(&spec, &x, &x).unwrap(), 1.0);
    }

    #[test]
    fn homogeneous_poly_direct_arithmetic() {
        let spec = KernelSpec::PolyHomogeneous { degree: 2 };
        let v = kernel_eval(&spec, &[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(v, 121.0); // (3 + 8)^2
    }

    #[test]
    fn inhomogeneous_poly_at_origin() {
        let spec = KernelSpec::PolyInhomogeneous { degree: 2, theta: 1.0 };
        assert_eq!(kernel_eval(&spec, &[0.0, 0.0], &[0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let spec = KernelSpec::Linear;
        assert!(kernel_eval(&spec, &[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn single_point_linear_gram() {
        let g = gram(&KernelSpec::Linear, &[vec![3.0, 4.0]], None).unwrap();
        assert_eq!(g.get(0, 0), 25.0);
    }

    #[test]
    fn rbf_gram_is_psd() {
        let mut rng = RngState::new(20);
        let points: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..3).map(|_| rng.next_f64() * 4.0 - 2.0).collect())
            .collect();
        let g = gram(&KernelSpec::Rbf { sigma: 1.3 }, &points, None).unwrap();
        let eig = sym_eig(&g, 1e-12).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-8));
    }

    #[test]
    fn labeled_gram_is_diag_scaled() {
        let mut rng = RngState::new(6);
        let points: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..2).map(|_| rng.next_f64()).collect())
            .collect();
        let labels: Vec<f64> = (0..6).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let k = gram(&KernelSpec::Linear, &points, None).unwrap();
        let m = gram(&KernelSpec::Linear, &points, Some(&labels)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((m.get(i, j) - labels[i] * labels[j] * k.get(i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(KernelSpec::Rbf { sigma: 0.0 }.validate().is_err());
        assert!(KernelSpec::PolyHomogeneous { degree: 0 }.validate().is_err());
        assert!(KernelSpec::PolyInhomogeneous { degree: 2, theta: -0.1 }
            .validate()
            .is_err());
    }
}
