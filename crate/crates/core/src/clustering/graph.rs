use serde::{Deserialize, Serialize};

use crate::numerics::Matrix;
use crate::{Error, Result};

/// Symmetric nonnegative similarity matrix over a vertex set, optionally
/// remembering the bandwidth it was built with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinityGraph {
    affinity: Matrix,
    pub sigma: Option<f64>,
}

impl AffinityGraph {
    pub fn new(affinity: Matrix) -> Result<Self> {
        if !affinity.is_square() {
            return Err(Error::Shape("affinity matrix must be square".into()));
        }
        if affinity.max_asymmetry() > 1e-12 * affinity.frobenius_norm().max(1.0) {
            return Err(Error::NotSymmetric);
        }
        if affinity.entries().iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidParameter("affinities must be nonnegative".into()));
        }
        Ok(Self {
            affinity,
            sigma: None,
        })
    }

    pub fn len(&self) -> usize {
        self.affinity.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matrix(&self) -> &Matrix {
        &self.affinity
    }

    /// Vertex degrees: row sums of the affinity matrix.
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.affinity.row(i).iter().sum())
            .collect()
    }

    /// Graph Laplacian `D - K`.
    pub fn laplacian(&self) -> Matrix {
        let n = self.len();
        let d = self.degrees();
        let mut l = self.affinity.scale(-1.0);
        for i in 0..n {
            l.set(i, i, l.get(i, i) + d[i]);
        }
        l
    }

    /// Degree-normalized affinity `D^{-1/2} K D^{-1/2}`. Errors on
    /// isolated vertices.
    pub fn normalized_affinity(&self) -> Result<Matrix> {
        let d = self.degrees();
        if let Some(i) = d.iter().position(|&x| x <= 0.0) {
            return Err(Error::IsolatedVertex(i));
        }
        let n = self.len();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(
                    i,
                    j,
                    self.affinity.get(i, j) / (d[i].sqrt() * d[j].sqrt()),
                );
            }
        }
        Ok(out)
    }
}

/// Radial-basis affinity `K_ij = exp(-||x_i - x_j||^2 / sigma^2)`:
/// symmetric with a unit diagonal, entries in `(0, 1]`.
pub fn affinity_rbf(points: &[Vec<f64>], sigma: f64) -> Result<AffinityGraph> {
    if points.is_empty() {
        return Err(Error::EmptyInput("affinity_rbf"));
    }
    if sigma <= 0.0 {
        return Err(Error::InvalidParameter("sigma must be positive".into()));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Shape("points must share a dimension".into()));
    }
    let m = points.len();
    let mut k = Matrix::zeros(m, m);
    for i in 0..m {
        k.set(i, i, 1.0);
        for j in (i + 1)..m {
            let sq: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let v = (-sq / (sigma * sigma)).exp();
            k.set(i, j, v);
            k.set(j, i, v);
        }
    }
    let mut g = AffinityGraph::new(k)?;
    g.sigma = Some(sigma);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sym_eig, RngState};

    #[test]
    fn coincident_points_have_unit_affinity() {
        let g = affinity_rbf(&[vec![1.0, 2.0], vec![1.0, 2.0]], 0.7).unwrap();
        assert_eq!(g.matrix().get(0, 1), 1.0);
    }

    #[test]
    fn distance_sigma_gives_exp_minus_one() {
        let g = affinity_rbf(&[vec![0.0], vec![2.5]], 2.5).unwrap();
        assert!((g.matrix().get(0, 1) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rbf_affinity_is_psd() {
        let base = RngState::new(70);
        for trial in 0..30 {
            let mut rng = base.derive(trial);
            let points: Vec<Vec<f64>> = (0..8)
                .map(|_| (0..2).map(|_| rng.next_f64() * 4.0 - 2.0).collect())
                .collect();
            let g = affinity_rbf(&points, 0.5 + rng.next_f64()).unwrap();
            let eig = sym_eig(g.matrix(), 1e-12).unwrap();
            assert!(
                eig.eigenvalues.iter().all(|&l| l >= -1e-8),
                "trial {trial}: {:?}",
                eig.eigenvalues
            );
        }
    }

    #[test]
    fn laplacian_annihilates_ones() {
        let mut rng = RngState::new(71);
        let points: Vec<Vec<f64>> = (0..10)
            .map(|_| vec![rng.next_f64(), rng.next_f64()])
            .collect();
        let g = affinity_rbf(&points, 1.0).unwrap();
        let l = g.laplacian();
        let ones = vec![1.0; 10];
        let lv = l.matvec(&ones).unwrap();
        assert!(lv.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn asymmetric_affinity_rejected() {
        let k = Matrix::new(2, 2, vec![1.0, 0.5, 0.2, 1.0]).unwrap();
        assert!(AffinityGraph::new(k).is_err());
    }

    #[test]
    fn isolated_vertex_detected() {
        let k = Matrix::new(2, 2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let g = AffinityGraph::new(k).unwrap();
        assert!(matches!(
            g.normalized_affinity(),
            Err(Error::IsolatedVertex(0))
        ));
    }
}
