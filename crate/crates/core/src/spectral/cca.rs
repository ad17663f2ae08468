use serde::{Deserialize, Serialize};

use crate::numerics::{qr, solve_spd, svd, Matrix};
use crate::{Error, Result};

/// Canonical correlation model: paired projection axes for the input and
/// output spaces and the cosines of the principal angles between the two
/// column spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcaModel {
    /// `k x q` input axes (columns).
    pub input_axes: Matrix,
    /// `s x q` output axes (columns).
    pub output_axes: Matrix,
    /// Cosines of the principal angles, descending in `[0, 1]`.
    pub cosines: Vec<f64>,
}

/// Canonical correlation analysis of paired samples stacked as rows of
/// `a` (`n x k` inputs) and `b` (`n x s` outputs).
///
/// Both matrices are QR-factored; the singular triplets of `Qa' Qb` give
/// the cosines, and the axes are recovered through the triangular factors
/// (`U = Ra^{-1} U_hat`, `V = Rb^{-1} V_hat`). Rank-deficient inputs are
/// reported as degenerate.
pub fn cca(a: &Matrix, b: &Matrix, q: usize) -> Result<CcaModel> {
    if a.rows() != b.rows() {
        return Err(Error::Shape("paired samples must have equal row counts".into()));
    }
    let (k, s) = (a.cols(), b.cols());
    if q == 0 || q > k.min(s) {
        return Err(Error::Shape(format!("q={q} outside 1..=min({k},{s})")));
    }
    let (qa, ra) = qr(a)?;
    let (qb, rb) = qr(b)?;
    let cross = qa.transpose().matmul(&qb)?;
    let dec = svd(&cross, q)?;
    let cosines: Vec<f64> = dec.singulars.iter().map(|&c| c.clamp(0.0, 1.0 + 1e-9)).collect();

    let input_axes = solve_triangular_columns(&ra, &dec.u)?;
    let output_axes = solve_triangular_columns(&rb, &dec.v)?;
    Ok(CcaModel {
        input_axes,
        output_axes,
        cosines,
    })
}

/// Solves `R X = C` column by column for upper-triangular `R`.
fn solve_triangular_columns(r: &Matrix, c: &Matrix) -> Result<Matrix> {
    let cols: Vec<Vec<f64>> = (0..c.cols())
        .map(|j| crate::numerics::solve_upper(r, &c.column(j)))
        .collect::<Result<_>>()?;
    Matrix::from_columns(&cols)
}

/// Predicts the output paired with `x`: the minimum-norm solution `y` of
/// `V' y = U' x`, i.e. `y = V (V'V)^{-1} U' x`.
pub fn cca_predict(model: &CcaModel, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != model.input_axes.rows() {
        return Err(Error::Shape("input dimension mismatch".into()));
    }
    let c = model.input_axes.transpose().matvec(x)?;
    let v = &model.output_axes;
    let vtv = v.transpose().matmul(v)?;
    let z = solve_spd(&vtv, &c)?;
    v.matvec(&z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngState;

    fn random_matrix(rng: &mut RngState, n: usize, k: usize) -> Matrix {
        Matrix::new(n, k, (0..n * k).map(|_| rng.next_f64() * 2.0 - 1.0).collect()).unwrap()
    }

    #[test]
    fn identical_spaces_have_unit_cosines() {
        let mut rng = RngState::new(60);
        let a = random_matrix(&mut rng, 12, 3);
        let model = cca(&a, &a, 3).unwrap();
        for &c in &model.cosines {
            assert!((c - 1.0).abs() < 1e-9, "cosine {c}");
        }
    }

    #[test]
    fn orthogonal_complement_has_zero_cosines() {
        // Build B's columns orthogonal to A's column space.
        let mut rng = RngState::new(61);
        let a = random_matrix(&mut rng, 10, 3);
        let (qa, _) = qr(&a).unwrap();
        let raw = random_matrix(&mut rng, 10, 2);
        // Project raw away from span(Qa).
        let proj = qa
            .matmul(&qa.transpose().matmul(&raw).unwrap())
            .unwrap();
        let b = raw.sub(&proj).unwrap();
        let model = cca(&a, &b, 2).unwrap();
        for &c in &model.cosines {
            assert!(c <= 1e-9, "cosine {c}");
        }
    }

    #[test]
    fn leading_cosine_matches_grid_oracle() {
        // Deterministic 100x100 grid over unit-vector pairs bounds the best
        // correlation from below within the grid resolution.
        let mut rng = RngState::new(62);
        let a = random_matrix(&mut rng, 10, 2);
        let b = random_matrix(&mut rng, 10, 2);
        let model = cca(&a, &b, 2).unwrap();
        let mut best = 0.0f64;
        let steps = 100;
        for i in 0..steps {
            let tu = std::f64::consts::PI * i as f64 / steps as f64;
            let u = [tu.cos(), tu.sin()];
            let au = a.matvec(&u).unwrap();
            let nau = au.iter().map(|v| v * v).sum::<f64>().sqrt();
            for j in 0..steps {
                let tv = std::f64::consts::PI * j as f64 / steps as f64;
                let v = [tv.cos(), tv.sin()];
                let bv = b.matvec(&v).unwrap();
                let nbv = bv.iter().map(|v| v * v).sum::<f64>().sqrt();
                let cos = au
                    .iter()
                    .zip(&bv)
                    .map(|(p, q)| p * q)
                    .sum::<f64>()
                    .abs()
                    / (nau * nbv);
                best = best.max(cos);
            }
        }
        assert!(best <= model.cosines[0] + 1e-9, "grid beat cca: {best} > {}", model.cosines[0]);
        assert!(
            model.cosines[0] - best <= 1e-3,
            "cca {} not matched by grid {best}",
            model.cosines[0]
        );
    }

    #[test]
    fn variates_are_mutually_orthogonal() {
        let mut rng = RngState::new(63);
        let a = random_matrix(&mut rng, 15, 4);
        let b = random_matrix(&mut rng, 15, 3);
        let model = cca(&a, &b, 3).unwrap();
        let variates = a.matmul(&model.input_axes).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let dot: f64 = (0..15)
                    .map(|r| variates.get(r, i) * variates.get(r, j))
                    .sum();
                assert!(dot.abs() < 1e-8, "variates {i},{j} correlate: {dot}");
            }
        }
    }

    #[test]
    fn cosines_invariant_under_column_recombination() {
        let mut rng = RngState::new(64);
        let a = random_matrix(&mut rng, 12, 3);
        let b = random_matrix(&mut rng, 12, 2);
        let model = cca(&a, &b, 2).unwrap();
        // Invertible recombination of A's columns spans the same space.
        let t = Matrix::new(3, 3, vec![2.0, 1.0, 0.0, 0.0, 1.0, 0.5, 1.0, 0.0, 1.0]).unwrap();
        let a2 = a.matmul(&t).unwrap();
        let model2 = cca(&a2, &b, 2).unwrap();
        for (c1, c2) in model.cosines.iter().zip(&model2.cosines) {
            assert!((c1 - c2).abs() < 1e-8, "{c1} vs {c2}");
        }
    }

    #[test]
    fn identical_data_prediction_is_consistent() {
        let mut rng = RngState::new(65);
        let a = random_matrix(&mut rng, 10, 3);
        let model = cca(&a, &a, 3).unwrap();
        let x: Vec<f64> = (0..3).map(|_| rng.next_f64()).collect();
        let y = cca_predict(&model, &x).unwrap();
        let ux = model.input_axes.transpose().matvec(&x).unwrap();
        let uy = model.input_axes.transpose().matvec(&y).unwrap();
        for (p, q) in ux.iter().zip(&uy) {
            assert!((p - q).abs() < 1e-8);
        }
    }

    #[test]
    fn exact_linear_map_is_recovered() {
        let mut rng = RngState::new(66);
        let map = Matrix::new(3, 3, vec![1.0, 0.2, 0.0, -0.5, 1.5, 0.3, 0.1, 0.0, 0.8]).unwrap();
        let a = random_matrix(&mut rng, 40, 3);
        let b = a.matmul(&map.transpose()).unwrap();
        let model = cca(&a, &b, 3).unwrap();
        for _ in 0..10 {
            let x: Vec<f64> = (0..3).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let want = map.matvec(&x).unwrap();
            let got = cca_predict(&model, &x).unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-6, "{got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn underdetermined_prediction_is_minimum_norm() {
        let mut rng = RngState::new(67);
        let a = random_matrix(&mut rng, 20, 2);
        let b = random_matrix(&mut rng, 20, 4);
        let q = 2;
        let model = cca(&a, &b, q).unwrap();
        let x: Vec<f64> = (0..2).map(|_| rng.next_f64()).collect();
        let y = cca_predict(&model, &x).unwrap();
        // Constraint satisfied.
        let vy = model.output_axes.transpose().matvec(&y).unwrap();
        let ux = model.input_axes.transpose().matvec(&x).unwrap();
        for (p, q) in vy.iter().zip(&ux) {
            assert!((p - q).abs() < 1e-8);
        }
        // Minimal norm among solutions: the normal-equations solution in the
        // row space of V'. Any feasible y decomposes as y0 + null component,
        // so compare against y0 built independently via V (V'V)^{-1} ux.
        let vtv = model
            .output_axes
            .transpose()
            .matmul(&model.output_axes)
            .unwrap();
        let z = solve_spd(&vtv, &ux).unwrap();
        let y0 = model.output_axes.matvec(&z).unwrap();
        let n_y: f64 = y.iter().map(|v| v * v).sum();
        let n_y0: f64 = y0.iter().map(|v| v * v).sum();
        assert!((n_y - n_y0).abs() < 1e-10);
    }

    #[test]
    fn rank_deficiency_is_degenerate() {
        let mut rng = RngState::new(68);
        let mut a = random_matrix(&mut rng, 8, 3);
        for i in 0..8 {
            let v = a.get(i, 0);
            a.set(i, 2, 2.0 * v); // third column dependent
        }
        let b = random_matrix(&mut rng, 8, 2);
        assert!(matches!(cca(&a, &b, 2), Err(Error::RankDeficient { .. })));
    }
}
