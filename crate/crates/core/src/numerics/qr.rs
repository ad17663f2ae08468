use super::matrix::{dot, norm};
use super::Matrix;
use crate::{Error, Result};

/// Thin QR factorization by modified Gram-Schmidt with a reorthogonalization
/// pass: `a = q * r` with orthonormal columns in `q` and upper-triangular `r`
/// with positive diagonal.
///
/// A column whose residual drops below `1e-10` times its original norm is
/// reported as rank-deficient.
pub fn qr(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let m = a.rows();
    let n = a.cols();
    if n == 0 || m == 0 {
        return Err(Error::EmptyInput("qr"));
    }
    if n > m {
        return Err(Error::Shape(format!(
            "qr needs rows >= cols, got {}x{}",
            m, n
        )));
    }
    let mut q_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        let col = a.column(j);
        let original_norm = norm(&col);
        let mut v = col;
        for (i, qi) in q_cols.iter().enumerate() {
            let rij = dot(qi, &v);
            for (vk, qk) in v.iter_mut().zip(qi) {
                *vk -= rij * qk;
            }
            r.set(i, j, rij);
        }
        // Second pass recovers orthogonality lost to cancellation.
        for (i, qi) in q_cols.iter().enumerate() {
            let correction = dot(qi, &v);
            for (vk, qk) in v.iter_mut().zip(qi) {
                *vk -= correction * qk;
            }
            r.set(i, j, r.get(i, j) + correction);
        }
        let rjj = norm(&v);
        if rjj <= 1e-10 * original_norm.max(1e-300) {
            return Err(Error::RankDeficient { column: j });
        }
        r.set(j, j, rjj);
        for vk in v.iter_mut() {
            *vk /= rjj;
        }
        q_cols.push(v);
    }
    Ok((Matrix::from_columns(&q_cols)?, r))
}

/// Back-substitution solve of `r x = b` for upper-triangular `r`.
pub(crate) fn solve_upper(r: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = r.rows();
    if b.len() != n {
        return Err(Error::Shape("solve_upper dimension mismatch".into()));
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in (i + 1)..n {
            s -= r.get(i, j) * x[j];
        }
        let d = r.get(i, i);
        if d == 0.0 {
            return Err(Error::RankDeficient { column: i });
        }
        x[i] = s / d;
    }
    Ok(x)
}
