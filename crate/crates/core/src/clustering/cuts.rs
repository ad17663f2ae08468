use serde::{Deserialize, Serialize};

use super::{kmeans, AffinityGraph, Partition};
use crate::numerics::sym_eig;
use crate::{Error, Result};

const MINCUT_LIMIT: usize = 20;

/// Exhaustive minimum-cut certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MincutResult {
    pub partition: Partition,
    pub cut_value: f64,
    /// `max_G trace(G'KG)` over 0/1 indicators, which equals
    /// `total_mass - 2 * cut_value`.
    pub trace_max: f64,
    /// Sum over all ordered vertex pairs (including the diagonal).
    pub total_mass: f64,
}

/// Minimum-weight bipartition by exhaustive enumeration (vertex 0 pinned
/// to the first side). Only sensible for small graphs; the guard is 20
/// vertices.
pub fn mincut_brute(g: &AffinityGraph) -> Result<MincutResult> {
    let m = g.len();
    if m < 2 {
        return Err(Error::EmptyInput("mincut needs at least two vertices"));
    }
    if m > MINCUT_LIMIT {
        return Err(Error::EnumerationGuard {
            got: m,
            limit: MINCUT_LIMIT,
        });
    }
    let k = g.matrix();
    let total_mass: f64 = k.entries().iter().sum();
    let mut best_mask = 1u32;
    let mut best_cut = f64::INFINITY;
    for mask in 1..(1u32 << (m - 1)) {
        // Bit i-1 set => vertex i on side B; vertex 0 stays on side A.
        let mut cut = 0.0;
        for i in 0..m {
            let side_i = i > 0 && mask >> (i - 1) & 1 == 1;
            for j in 0..m {
                let side_j = j > 0 && mask >> (j - 1) & 1 == 1;
                if side_i != side_j {
                    cut += k.get(i, j);
                }
            }
        }
        cut /= 2.0; // unordered pairs
        if cut < best_cut {
            best_cut = cut;
            best_mask = mask;
        }
    }
    let assignment: Vec<usize> = (0..m)
        .map(|i| usize::from(i > 0 && best_mask >> (i - 1) & 1 == 1))
        .collect();
    Ok(MincutResult {
        partition: Partition::new(assignment, 2)?,
        cut_value: best_cut,
        trace_max: total_mass - 2.0 * best_cut,
        total_mass,
    })
}

/// Removes the component of `v` along `direction` (need not be unit).
fn project_out(v: &mut [f64], direction: &[f64]) {
    let norm_sq: f64 = direction.iter().map(|x| x * x).sum();
    if norm_sq <= 0.0 {
        return;
    }
    let coeff: f64 = v.iter().zip(direction).map(|(a, b)| a * b).sum::<f64>() / norm_sq;
    for (x, d) in v.iter_mut().zip(direction) {
        *x -= coeff * d;
    }
}

/// Sign-based bipartition: zeros go to the positive side; the result is
/// canonicalized so vertex 0 is in class 0.
fn sign_partition(z: &[f64]) -> Result<Partition> {
    let assignment: Vec<usize> = z.iter().map(|&v| usize::from(v < 0.0)).collect();
    let mut p = Partition::new(assignment, 2)?;
    p.canonicalize();
    Ok(p)
}

/// Ratio-cut bipartition: signs of the second-smallest eigenvector of the
/// Laplacian `D - K`. The known kernel direction (the constant vector) is
/// projected out first so that degenerate spectra (disconnected graphs)
/// still yield the component split.
pub fn ratio_cut(g: &AffinityGraph) -> Result<Partition> {
    let m = g.len();
    if m < 2 {
        return Err(Error::EmptyInput("ratio_cut needs at least two vertices"));
    }
    let eig = sym_eig(&g.laplacian(), 1e-12)?;
    // Eigenvalues descend: the second smallest sits at index m-2.
    let mut z = eig.eigenvectors.column(m - 2);
    let ones = vec![1.0; m];
    project_out(&mut z, &ones);
    crate::numerics::canonical_sign(&mut z);
    sign_partition(&z)
}

/// Normalized-cut partition on the degree-normalized affinity
/// `K' = D^{-1/2} K D^{-1/2}`.
///
/// For `k = 2` the signs of the second leading eigenvector decide (after
/// projecting out the known top eigenvector `D^{1/2} 1`). For `k > 2` the
/// points are re-coordinated by the rows of the top-`k` eigenvector matrix
/// and clustered by seeded k-means; `row_normalize` optionally scales the
/// embedding rows to unit length first.
pub fn normalized_cut(g: &AffinityGraph, k: usize, seed: u64) -> Result<Partition> {
    normalized_cut_opts(g, k, seed, false)
}

pub fn normalized_cut_opts(
    g: &AffinityGraph,
    k: usize,
    seed: u64,
    row_normalize: bool,
) -> Result<Partition> {
    let m = g.len();
    if k < 2 || k > m {
        return Err(Error::InvalidParameter(format!("k={k} outside 2..={m}")));
    }
    let normalized = g.normalized_affinity()?;
    let eig = sym_eig(&normalized, 1e-12)?;
    if k == 2 {
        let mut z = eig.eigenvectors.column(1);
        let d_sqrt_ones: Vec<f64> = g.degrees().iter().map(|d| d.sqrt()).collect();
        project_out(&mut z, &d_sqrt_ones);
        crate::numerics::canonical_sign(&mut z);
        return sign_partition(&z);
    }
    let mut rows: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..k).map(|j| eig.eigenvectors.get(i, j)).collect())
        .collect();
    if row_normalize {
        for row in rows.iter_mut() {
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                for x in row.iter_mut() {
                    *x /= norm;
                }
            }
        }
    }
    let result = kmeans(&rows, k, seed, 200)?;
    Ok(result.partition)
}

fn split_masses(g: &AffinityGraph, partition: &Partition) -> Result<(f64, f64, f64, f64, f64)> {
    if partition.k != 2 || partition.assignment.len() != g.len() {
        return Err(Error::Shape("need a bipartition of the graph".into()));
    }
    let k = g.matrix();
    let mut cut = 0.0;
    let mut within = [0.0f64; 2];
    let mut volume = [0.0f64; 2];
    for i in 0..g.len() {
        let ci = partition.assignment[i];
        for j in 0..g.len() {
            let w = k.get(i, j);
            volume[ci] += w;
            if partition.assignment[j] == ci {
                within[ci] += w;
            } else {
                cut += w;
            }
        }
    }
    let cut = cut / 2.0;
    Ok((cut, within[0], within[1], volume[0], volume[1]))
}

/// Normalized-cut cost of a bipartition:
/// `cut/vol(A) + cut/vol(B)`.
pub fn ncut_value(g: &AffinityGraph, partition: &Partition) -> Result<f64> {
    let (cut, _, _, va, vb) = split_masses(g, partition)?;
    if va <= 0.0 || vb <= 0.0 {
        return Err(Error::ZeroVolume);
    }
    Ok(cut / va + cut / vb)
}

/// Within-group association of a bipartition:
/// `assoc(A)/vol(A) + assoc(B)/vol(B)`. Complements the cut cost:
/// the two sum to 2.
pub fn nassoc_value(g: &AffinityGraph, partition: &Partition) -> Result<f64> {
    let (_, wa, wb, va, vb) = split_masses(g, partition)?;
    if va <= 0.0 || vb <= 0.0 {
        return Err(Error::ZeroVolume);
    }
    Ok(wa / va + wb / vb)
}
