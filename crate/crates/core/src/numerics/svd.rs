use super::matrix::{dot, norm};
use super::{canonical_sign, sym_eig, Matrix};
use crate::{Error, Result};

/// Top-`q` singular triplets.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    pub singulars: Vec<f64>,
    pub v: Matrix,
}

/// Singular value decomposition via the eigendecomposition of the smaller
/// Gram matrix (`a' a` or `a a'`). Singular values below `1e-12` times the
/// largest are truncated to exact zero; the matching singular vectors on the
/// long side are completed to an orthonormal set.
pub fn svd(a: &Matrix, q: usize) -> Result<SvdResult> {
    let (m, n) = (a.rows(), a.cols());
    if q > m.min(n) {
        return Err(Error::Shape(format!(
            "svd rank {} exceeds min({}, {})",
            q, m, n
        )));
    }
    let tall = m >= n;
    // Eigen side: the smaller Gram matrix.
    let gram = if tall {
        a.transpose().matmul(a)?
    } else {
        a.matmul(&a.transpose())?
    };
    let eig = sym_eig(&gram, 1e-14)?;
    let cutoff = 1e-12 * eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0).sqrt();

    let mut short_cols: Vec<Vec<f64>> = Vec::with_capacity(q);
    let mut long_cols: Vec<Vec<f64>> = Vec::with_capacity(q);
    let mut singulars = Vec::with_capacity(q);
    for i in 0..q {
        let sigma = eig.eigenvalues[i].max(0.0).sqrt();
        let sigma = if sigma <= cutoff { 0.0 } else { sigma };
        let short = eig.eigenvectors.column(i);
        let mapped = if tall {
            a.matvec(&short)?
        } else {
            a.transpose().matvec(&short)?
        };
        singulars.push(sigma);
        short_cols.push(short);
        if sigma > 0.0 {
            long_cols.push(mapped.iter().map(|x| x / sigma).collect());
        } else {
            long_cols.push(vec![]); // placeholder, filled below
        }
    }
    complete_orthonormal(&mut long_cols, if tall { m } else { n });

    let (u, v) = if tall {
        (Matrix::from_columns(&long_cols)?, Matrix::from_columns(&short_cols)?)
    } else {
        (Matrix::from_columns(&short_cols)?, Matrix::from_columns(&long_cols)?)
    };
    Ok(SvdResult { u, singulars, v })
}

/// Fills placeholder (empty) columns with unit vectors orthogonal to all
/// existing columns, drawn from the canonical basis.
fn complete_orthonormal(cols: &mut [Vec<f64>], dim: usize) {
    for idx in 0..cols.len() {
        if !cols[idx].is_empty() {
            continue;
        }
        let mut filled = None;
        for basis in 0..dim {
            let mut candidate = vec![0.0; dim];
            candidate[basis] = 1.0;
            for other in cols.iter().filter(|c| !c.is_empty()) {
                let proj = dot(other, &candidate);
                for (c, o) in candidate.iter_mut().zip(other) {
                    *c -= proj * o;
                }
            }
            let len = norm(&candidate);
            if len > 1e-6 {
                for c in candidate.iter_mut() {
                    *c /= len;
                }
                canonical_sign(&mut candidate);
                filled = Some(candidate);
                break;
            }
        }
        cols[idx] = filled.expect("orthonormal completion must succeed for dim >= columns");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngState;

    #[test]
    fn diagonal_full() {
        let a = Matrix::diag(&[2.0, 1.0]);
        let r = svd(&a, 2).unwrap();
        assert!((r.singulars[0] - 2.0).abs() < 1e-12);
        assert!((r.singulars[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_outer_product() {
        let x = [1.0, 2.0, 2.0];
        let y = [3.0, 4.0];
        let mut a = Matrix::zeros(3, 2);
        for i in 0..3 {
            for j in 0..2 {
                a.set(i, j, x[i] * y[j]);
            }
        }
        let r = svd(&a, 2).unwrap();
        let nx = 3.0; // |x|
        let ny = 5.0; // |y|
        assert!((r.singulars[0] - nx * ny).abs() < 1e-9);
        assert_eq!(r.singulars[1], 0.0);
        // Orthonormal u even at the truncated singular value.
        let utu = r.u.transpose().matmul(&r.u).unwrap();
        assert!(utu.sub(&Matrix::identity(2)).unwrap().frobenius_norm() < 1e-9);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = RngState::new(19);
        let a = Matrix::new(4, 3, (0..12).map(|_| rng.next_f64() * 2.0 - 1.0).collect()).unwrap();
        let r = svd(&a, 3).unwrap();
        let recon = r
            .u
            .matmul(&Matrix::diag(&r.singulars))
            .unwrap()
            .matmul(&r.v.transpose())
            .unwrap();
        assert!(recon.sub(&a).unwrap().frobenius_norm() < 1e-8 * a.frobenius_norm().max(1.0));
        assert!(r.singulars.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.singulars.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn wide_matrix_uses_other_gram() {
        let mut rng = RngState::new(23);
        let a = Matrix::new(3, 5, (0..15).map(|_| rng.next_f64() - 0.5).collect()).unwrap();
        let r = svd(&a, 3).unwrap();
        let recon = r
            .u
            .matmul(&Matrix::diag(&r.singulars))
            .unwrap()
            .matmul(&r.v.transpose())
            .unwrap();
        assert!(recon.sub(&a).unwrap().frobenius_norm() < 1e-8);
    }

    #[test]
    fn q_out_of_range() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(svd(&a, 3), Err(Error::Shape(_))));
    }

    #[test]
    fn symmetric_psd_singulars_match_eigenvalues() {
        let mut rng = RngState::new(5);
        let b = Matrix::new(4, 4, (0..16).map(|_| rng.next_f64() - 0.3).collect()).unwrap();
        let a = b.matmul(&b.transpose()).unwrap(); // PSD
        let eig = sym_eig(&a, 1e-14).unwrap();
        let s = svd(&a, 4).unwrap();
        for i in 0..4 {
            assert!((s.singulars[i] - eig.eigenvalues[i].max(0.0)).abs() < 1e-8);
        }
    }
}
