use serde::{Deserialize, Serialize};

use super::{canonical_sign, Matrix};
use crate::{Error, Result};

/// Full spectrum of a symmetric matrix: eigenvalues in descending order with
/// orthonormal eigenvector columns aligned to them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymEigResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps annihilate one off-diagonal entry at a time; the iteration stops
/// once the off-diagonal Frobenius mass drops below `tol` relative to the
/// input norm. Eigenvalues are returned in descending order and each
/// eigenvector is flipped so its first nonzero component is positive.
pub fn sym_eig(a: &Matrix, tol: f64) -> Result<SymEigResult> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "sym_eig needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.frobenius_norm().max(1.0);
    if a.max_asymmetry() > tol.max(1e-12) * scale {
        return Err(Error::NotSymmetric);
    }
    if n == 0 {
        return Ok(SymEigResult {
            eigenvalues: vec![],
            eigenvectors: Matrix::zeros(0, 0),
        });
    }

    let mut m = a.clone();
    // Symmetrize exactly so rounding in the input cannot bias rotations.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    let mut v = Matrix::identity(n);
    let target = tol.max(f64::EPSILON) * scale;

    const MAX_SWEEPS: usize = 100;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq.abs() <= f64::EPSILON * scale {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > target {
        return Err(Error::NoConvergence(
            "sym_eig",
            format!("off-diagonal mass {:.3e} above {:.3e}", off_diagonal_norm(&m), target),
        ));
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n).map(|i| (m.get(i, i), v.column(i))).collect();
    // Descending by eigenvalue; stable for ties.
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let eigenvalues = pairs.iter().map(|(l, _)| *l).collect();
    let mut columns: Vec<Vec<f64>> = pairs.into_iter().map(|(_, c)| c).collect();
    for col in &mut columns {
        canonical_sign(col);
    }
    Ok(SymEigResult {
        eigenvalues,
        eigenvectors: Matrix::from_columns(&columns)?,
    })
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += 2.0 * m.get(i, j) * m.get(i, j);
        }
    }
    sum.sqrt()
}

/// Applies the Jacobi rotation J(p,q,c,s) as a similarity transform on `m`
/// and accumulates it into the eigenvector matrix `v`.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, c * mkp - s * mkq);
        m.set(k, q, s * mkp + c * mkq);
    }
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, c * mpk - s * mqk);
        m.set(q, k, s * mpk + c * mqk);
    }
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngState;

    #[test]
    fn diagonal_case() {
        let a = Matrix::diag(&[3.0, 1.0]);
        let r = sym_eig(&a, 1e-12).unwrap();
        assert_eq!(r.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(r.eigenvectors, Matrix::identity(2));
    }

    #[test]
    fn analytic_2x2() {
        let a = Matrix::new(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let r = sym_eig(&a, 1e-12).unwrap();
        assert!((r.eigenvalues[0] - 3.0).abs() < 1e-12);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = RngState::new(7);
        let n = 6;
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.next_f64() * 2.0 - 1.0;
                a.set(i, j, v);
                a.set(j, i, v);
            }
        }
        let r = sym_eig(&a, 1e-14).unwrap();
        let v = &r.eigenvectors;
        let recon = v
            .matmul(&Matrix::diag(&r.eigenvalues))
            .unwrap()
            .matmul(&v.transpose())
            .unwrap();
        assert!(recon.sub(&a).unwrap().frobenius_norm() < 1e-9);
        // Orthonormal columns.
        let vtv = v.transpose().matmul(v).unwrap();
        assert!(vtv.sub(&Matrix::identity(n)).unwrap().frobenius_norm() < 1e-9);
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        let mut rng = RngState::new(11);
        for _ in 0..10 {
            let n = 5;
            let mut a = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = rng.next_f64() * 4.0 - 2.0;
                    a.set(i, j, v);
                    a.set(j, i, v);
                }
            }
            let r = sym_eig(&a, 1e-13).unwrap();
            let sum: f64 = r.eigenvalues.iter().sum();
            assert!((sum - a.trace()).abs() <= 1e-8 * a.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let a = Matrix::new(2, 2, vec![1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(matches!(sym_eig(&a, 1e-12), Err(Error::NotSymmetric)));
    }

    #[test]
    fn rejects_non_square() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(sym_eig(&a, 1e-12), Err(Error::Shape(_))));
    }

    #[test]
    fn sign_convention() {
        // Eigenvector of [[0,1],[1,0]] for eigenvalue -1 is (1,-1)/sqrt(2) or
        // its negation; the convention forces the first component positive.
        let a = Matrix::new(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let r = sym_eig(&a, 1e-12).unwrap();
        assert!(r.eigenvectors.get(0, 0) > 0.0);
        assert!(r.eigenvectors.get(0, 1) > 0.0);
    }
}
