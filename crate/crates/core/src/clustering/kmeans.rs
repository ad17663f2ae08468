use serde::{Deserialize, Serialize};

use crate::numerics::{Matrix, RngState};
use crate::{Error, Result};

/// A k-way assignment of points to classes `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub k: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 || assignment.iter().any(|&c| c >= k) {
            return Err(Error::InvalidParameter("class index out of range".into()));
        }
        Ok(Self { assignment, k })
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Relabels classes by order of first appearance, so the class holding
    /// point 0 is class 0. Canonical form for comparing partitions.
    pub fn canonicalize(&mut self) {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        for c in self.assignment.iter_mut() {
            if map[*c] == usize::MAX {
                map[*c] = next;
                next += 1;
            }
            *c = map[*c];
        }
    }

    /// True when the two partitions agree up to a relabeling of classes.
    pub fn same_up_to_relabeling(&self, other: &Partition) -> bool {
        if self.assignment.len() != other.assignment.len() || self.k != other.k {
            return false;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        a.canonicalize();
        b.canonicalize();
        a.assignment == b.assignment
    }

    /// The scaled indicator `G` with `G_ij = 1/sqrt(l_j)` for members:
    /// `G >= 0`, `G'G = I`, `G G' 1 = 1`.
    pub fn indicator(&self) -> Result<Matrix> {
        let sizes = self.class_sizes();
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyClass(empty));
        }
        let mut g = Matrix::zeros(self.assignment.len(), self.k);
        for (i, &c) in self.assignment.iter().enumerate() {
            g.set(i, c, 1.0 / (sizes[c] as f64).sqrt());
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmeansResult {
    pub partition: Partition,
    pub centers: Vec<Vec<f64>>,
    /// Sum-of-squares objective after each assignment step.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn objective(points: &[Vec<f64>], assignment: &[usize], centers: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(p, &c)| squared_distance(p, &centers[c]))
        .sum()
}

/// Lloyd iteration: nearest-center assignment (ties to the lowest center
/// index) alternating with mean updates, from a seeded draw of `k`
/// distinct data points as starting centers. Empty clusters are repaired
/// by stealing the point farthest from its current center. The objective
/// never increases; iteration stops at an assignment fixed point.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, max_iter: usize) -> Result<KmeansResult> {
    let m = points.len();
    if m == 0 {
        return Err(Error::EmptyInput("kmeans"));
    }
    if k == 0 || k > m {
        return Err(Error::InvalidParameter(format!(
            "k={k} outside 1..={m}"
        )));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Shape("points must share a dimension".into()));
    }
    let mut rng = RngState::new(seed);
    let mut centers: Vec<Vec<f64>> = rng
        .choose_distinct(m, k)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();

    let mut assignment = vec![0usize; m];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..max_iter.max(1) {
        // Assignment step, ties to the lowest index.
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = squared_distance(p, &centers[0]);
            for (c, center) in centers.iter().enumerate().skip(1) {
                let d = squared_distance(p, center);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            if assignment[i] != best {
                assignment[i] = best;
                changed = true;
            }
        }
        // Empty-cluster repair: move the globally farthest point.
        loop {
            let mut sizes = vec![0usize; k];
            for &c in &assignment {
                sizes[c] += 1;
            }
            let Some(empty) = sizes.iter().position(|&s| s == 0) else {
                break;
            };
            let (far, _) = points
                .iter()
                .enumerate()
                .filter(|(i, _)| sizes[assignment[*i]] > 1)
                .map(|(i, p)| (i, squared_distance(p, &centers[assignment[i]])))
                .max_by(|(ia, a), (ib, b)| {
                    a.partial_cmp(b)
                        .unwrap()
                        .then(ib.cmp(ia)) // ties to the lowest point index
                })
                .expect("a nonempty class with >1 members must exist");
            assignment[far] = empty;
            centers[empty] = points[far].clone();
            changed = true;
        }
        trace.push(objective(points, &assignment, &centers));
        if !changed && iterations > 0 {
            converged = true;
            break;
        }
        // Mean update.
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(p) {
                *s += x;
            }
        }
        for (c, sum) in sums.iter_mut().enumerate() {
            for s in sum.iter_mut() {
                *s /= counts[c] as f64;
            }
        }
        centers = sums;
        iterations += 1;
    }
    let mut partition = Partition::new(assignment, k)?;
    partition.canonicalize();
    // Re-order centers to match the canonical labels.
    let mut relabeled = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in points.iter().zip(&partition.assignment) {
        counts[c] += 1;
        for (s, x) in relabeled[c].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (c, center) in relabeled.iter_mut().enumerate() {
        for s in center.iter_mut() {
            *s /= counts[c].max(1) as f64;
        }
    }
    Ok(KmeansResult {
        partition,
        centers: relabeled,
        objective_trace: trace,
        iterations,
        converged,
    })
}

/// The clustering objective both ways: the definitional sum of squared
/// distances to class means, and the trace form `trace(G'KG)` over the
/// linear Gram matrix. They satisfy
/// `sum_i ||x_i||^2 = sum-of-squares + trace-form`.
pub fn kmeans_objective_matrix(
    points: &[Vec<f64>],
    partition: &Partition,
) -> Result<(f64, f64)> {
    if points.len() != partition.assignment.len() {
        return Err(Error::Shape("partition length mismatch".into()));
    }
    let sizes = partition.class_sizes();
    if let Some(empty) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::EmptyClass(empty));
    }
    let dim = points[0].len();
    // Definitional route.
    let mut centers = vec![vec![0.0; dim]; partition.k];
    for (p, &c) in points.iter().zip(&partition.assignment) {
        for (s, x) in centers[c].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (c, center) in centers.iter_mut().enumerate() {
        for s in center.iter_mut() {
            *s /= sizes[c] as f64;
        }
    }
    let sos = objective(points, &partition.assignment, &centers);
    // Trace route through the indicator and the Gram matrix.
    let g = partition.indicator()?;
    let mut gram = Matrix::zeros(points.len(), points.len());
    for i in 0..points.len() {
        for j in 0..points.len() {
            gram.set(
                i,
                j,
                points[i].iter().zip(&points[j]).map(|(a, b)| a * b).sum(),
            );
        }
    }
    let trace_form = g.transpose().matmul(&gram)?.matmul(&g)?.trace();
    Ok((sos, trace_form))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob(rng: &mut RngState, center: (f64, f64), n: usize, noise: f64) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| {
                vec![
                    center.0 + noise * rng.next_normal(),
                    center.1 + noise * rng.next_normal(),
                ]
            })
            .collect()
    }

    #[test]
    fn k1_returns_global_mean_and_total_scatter() {
        let points = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 3.0]];
        let r = kmeans(&points, 1, 0, 100).unwrap();
        assert!((r.centers[0][0] - 1.0).abs() < 1e-12);
        assert!((r.centers[0][1] - 1.0).abs() < 1e-12);
        let scatter: f64 = points
            .iter()
            .map(|p| squared_distance(p, &r.centers[0]))
            .sum();
        assert!((r.objective_trace.last().unwrap() - scatter).abs() < 1e-12);
    }

    #[test]
    fn planted_clusters_recovered() {
        let mut rng = RngState::new(7);
        let mut points = blob(&mut rng, (10.0, 0.0), 20, 1.0);
        points.extend(blob(&mut rng, (-10.0, 0.0), 20, 1.0));
        let r = kmeans(&points, 2, 7, 100).unwrap();
        let mut want: Vec<usize> = vec![0; 20];
        want.extend(vec![1; 20]);
        let planted = Partition::new(want, 2).unwrap();
        assert!(r.partition.same_up_to_relabeling(&planted));
        assert!(r.converged);
    }

    #[test]
    fn objective_never_increases() {
        let mut rng = RngState::new(8);
        let points: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.next_f64() * 4.0, rng.next_f64() * 4.0])
            .collect();
        let r = kmeans(&points, 4, 3, 100).unwrap();
        for w in r.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-10, "objective rose: {:?}", r.objective_trace);
        }
    }

    #[test]
    fn local_optimum_sanity_against_brute_force() {
        let mut rng = RngState::new(9);
        let points: Vec<Vec<f64>> = (0..8)
            .map(|_| vec![rng.next_f64() * 2.0, rng.next_f64() * 2.0])
            .collect();
        let r = kmeans(&points, 2, 5, 100).unwrap();
        // Exhaustive optimum over all 2-partitions.
        let mut best = f64::INFINITY;
        for mask in 1..(1u32 << 8) - 1 {
            let assignment: Vec<usize> =
                (0..8).map(|i| usize::from(mask >> i & 1 == 1)).collect();
            let partition = Partition::new(assignment, 2).unwrap();
            if partition.class_sizes().iter().any(|&s| s == 0) {
                continue;
            }
            let (sos, _) = kmeans_objective_matrix(&points, &partition).unwrap();
            best = best.min(sos);
        }
        let achieved = *r.objective_trace.last().unwrap();
        assert!(achieved >= best - 1e-10, "local {achieved} below global {best}");
    }

    #[test]
    fn identical_points_have_zero_objective() {
        let points = vec![vec![1.0, 1.0]; 5];
        let partition = Partition::new(vec![0; 5], 1).unwrap();
        let (sos, trace_form) = kmeans_objective_matrix(&points, &partition).unwrap();
        assert!(sos.abs() < 1e-12);
        let total: f64 = points.iter().map(|p| squared_distance(p, &vec![0.0; 2])).sum();
        assert!((trace_form - total).abs() < 1e-10);
    }

    #[test]
    fn objective_identity_over_all_bipartitions() {
        let mut rng = RngState::new(10);
        let points: Vec<Vec<f64>> = (0..6)
            .map(|_| vec![rng.next_f64() * 3.0, rng.next_f64() * 3.0])
            .collect();
        let total: f64 = points
            .iter()
            .map(|p| p.iter().map(|x| x * x).sum::<f64>())
            .sum();
        for mask in 1..(1u32 << 6) - 1 {
            let assignment: Vec<usize> =
                (0..6).map(|i| usize::from(mask >> i & 1 == 1)).collect();
            let partition = Partition::new(assignment, 2).unwrap();
            if partition.class_sizes().iter().any(|&s| s == 0) {
                continue;
            }
            let (sos, trace_form) = kmeans_objective_matrix(&points, &partition).unwrap();
            assert!(
                (total - sos - trace_form).abs() < 1e-10,
                "identity broken: {total} != {sos} + {trace_form}"
            );
        }
    }

    #[test]
    fn indicator_satisfies_all_three_conditions() {
        let partition = Partition::new(vec![0, 1, 0, 2, 1, 0], 3).unwrap();
        let g = partition.indicator().unwrap();
        assert!(g.entries().iter().all(|&x| x >= 0.0));
        let gtg = g.transpose().matmul(&g).unwrap();
        assert!(gtg.sub(&Matrix::identity(3)).unwrap().frobenius_norm() < 1e-12);
        let ggt1 = g
            .matmul(&g.transpose())
            .unwrap()
            .matvec(&vec![1.0; 6])
            .unwrap();
        assert!(ggt1.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn empty_class_is_an_error() {
        let partition = Partition::new(vec![0, 0, 0], 2).unwrap();
        assert!(matches!(
            kmeans_objective_matrix(&[vec![1.0], vec![2.0], vec![3.0]], &partition),
            Err(Error::EmptyClass(1))
        ));
    }

    #[test]
    fn k_larger_than_sample_rejected() {
        assert!(kmeans(&[vec![1.0]], 2, 0, 10).is_err());
    }
}
