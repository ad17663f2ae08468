use std::collections::BTreeSet;

use crate::numerics::RngState;

/// A concept class with an exact dichotomy enumerator over finite point
/// sets. Enumeration is combinatorial (sweeps over sorted coordinates and
/// candidate boundaries), never parameter sampling, so the counts feed
/// directly into growth-function and shattering arguments.
pub trait Concepts {
    type Point: Clone;

    fn name(&self) -> &'static str;

    /// Every realizable labeling of `points`, as boolean vectors aligned
    /// with the input order. Set semantics: each dichotomy appears once.
    fn dichotomies(&self, points: &[Self::Point]) -> BTreeSet<Vec<bool>>;

    /// Sample points for growth experiments.
    fn random_points(&self, m: usize, rng: &mut RngState) -> Vec<Self::Point>;
}

/// Closed intervals `[a, b]` on the line: a point is positive when it lies
/// inside.
pub struct Intervals;

impl Concepts for Intervals {
    type Point = f64;

    fn name(&self) -> &'static str {
        "intervals"
    }

    fn dichotomies(&self, points: &[f64]) -> BTreeSet<Vec<bool>> {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap());
        let mut out = BTreeSet::new();
        out.insert(vec![false; points.len()]); // empty interval
        // An interval selects a contiguous run of the sorted points; equal
        // coordinates are always labeled together.
        for start in 0..order.len() {
            for end in start..order.len() {
                let lo = points[order[start]];
                let hi = points[order[end]];
                let labels: Vec<bool> = points.iter().map(|&x| x >= lo && x <= hi).collect();
                out.insert(labels);
            }
        }
        out
    }

    fn random_points(&self, m: usize, rng: &mut RngState) -> Vec<f64> {
        (0..m).map(|_| rng.next_f64()).collect()
    }
}

/// Axis-aligned rectangles in the plane (closed boundaries).
pub struct AxisRectangles;

impl Concepts for AxisRectangles {
    type Point = [f64; 2];

    fn name(&self) -> &'static str {
        "rectangles"
    }

    fn dichotomies(&self, points: &[[f64; 2]]) -> BTreeSet<Vec<bool>> {
        let mut out = BTreeSet::new();
        out.insert(vec![false; points.len()]);
        // Any realizable labeling is realized by the bounding box of its
        // positives, so candidate boxes range over coordinate pairs.
        let mut xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
        let mut ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ys.dedup();
        for (xi, &x_lo) in xs.iter().enumerate() {
            for &x_hi in &xs[xi..] {
                for (yi, &y_lo) in ys.iter().enumerate() {
                    for &y_hi in &ys[yi..] {
                        let labels: Vec<bool> = points
                            .iter()
                            .map(|p| {
                                p[0] >= x_lo && p[0] <= x_hi && p[1] >= y_lo && p[1] <= y_hi
                            })
                            .collect();
                        out.insert(labels);
                    }
                }
            }
        }
        out
    }

    fn random_points(&self, m: usize, rng: &mut RngState) -> Vec<[f64; 2]> {
        (0..m).map(|_| [rng.next_f64(), rng.next_f64()]).collect()
    }
}

/// Closed half-planes `{x : w'x >= c}`.
///
/// Enumeration assumes the points are in general position (no three
/// collinear): every realizable dichotomy is then witnessed by a boundary
/// through some pair of points with the two boundary points assigned
/// freely, plus the two constant labelings.
pub struct HalfPlanes;

impl Concepts for HalfPlanes {
    type Point = [f64; 2];

    fn name(&self) -> &'static str {
        "halfplanes"
    }

    fn dichotomies(&self, points: &[[f64; 2]]) -> BTreeSet<Vec<bool>> {
        let m = points.len();
        let mut out = BTreeSet::new();
        out.insert(vec![false; m]);
        out.insert(vec![true; m]);
        if m == 1 {
            return out;
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let dir = [points[j][0] - points[i][0], points[j][1] - points[i][1]];
                let normal = [-dir[1], dir[0]];
                let offset = normal[0] * points[i][0] + normal[1] * points[i][1];
                for flip in [1.0f64, -1.0] {
                    let base: Vec<bool> = points
                        .iter()
                        .map(|p| flip * (normal[0] * p[0] + normal[1] * p[1] - offset) > 0.0)
                        .collect();
                    for bi in [false, true] {
                        for bj in [false, true] {
                            let mut labels = base.clone();
                            labels[i] = bi;
                            labels[j] = bj;
                            out.insert(labels);
                        }
                    }
                }
            }
        }
        out
    }

    fn random_points(&self, m: usize, rng: &mut RngState) -> Vec<[f64; 2]> {
        (0..m).map(|_| [rng.next_f64(), rng.next_f64()]).collect()
    }
}

/// A finite concept class given extensionally: one labeling row per
/// concept over a fixed universe; points are universe indices.
pub struct FiniteTable {
    pub rows: Vec<Vec<bool>>,
}

impl FiniteTable {
    pub fn universe_size(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn concept_count(&self) -> usize {
        self.rows.len()
    }
}

impl Concepts for FiniteTable {
    type Point = usize;

    fn name(&self) -> &'static str {
        "finite"
    }

    fn dichotomies(&self, points: &[usize]) -> BTreeSet<Vec<bool>> {
        self.rows
            .iter()
            .map(|row| points.iter().map(|&i| row[i]).collect())
            .collect()
    }

    fn random_points(&self, m: usize, rng: &mut RngState) -> Vec<usize> {
        let n = self.universe_size();
        let m = m.min(n);
        rng.choose_distinct(n, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals_on_three_points_miss_one_labeling() {
        let d = Intervals.dichotomies(&[0.1, 0.5, 0.9]);
        assert_eq!(d.len(), 7);
        // (+, -, +) is the unrealizable labeling.
        assert!(!d.contains(&vec![true, false, true]));
    }

    #[test]
    fn intervals_shatter_two_points() {
        let d = Intervals.dichotomies(&[0.3, 0.6]);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn duplicate_points_share_labels() {
        let d = Intervals.dichotomies(&[0.4, 0.4]);
        assert_eq!(d.len(), 2); // only (-,-) and (+,+)
    }

    #[test]
    fn rectangles_shatter_the_cross() {
        let cross = [[0.0, 1.0], [0.0, -1.0], [1.0, 0.0], [-1.0, 0.0]];
        let d = AxisRectangles.dichotomies(&cross);
        assert_eq!(d.len(), 16);
    }

    #[test]
    fn rectangles_cannot_isolate_an_interior_point() {
        let five = [
            [0.0, 1.0],
            [0.0, -1.0],
            [1.0, 0.0],
            [-1.0, 0.0],
            [0.0, 0.0], // interior
        ];
        let d = AxisRectangles.dichotomies(&five);
        // Outer four positive, interior negative is unrealizable.
        assert!(!d.contains(&vec![true, true, true, true, false]));
        assert!(d.len() < 32);
    }

    #[test]
    fn halfplanes_shatter_a_triangle() {
        let triangle = [[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]];
        let d = HalfPlanes.dichotomies(&triangle);
        assert_eq!(d.len(), 8);
    }

    #[test]
    fn halfplanes_cannot_split_diagonals_of_a_convex_quad() {
        let quad = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let d = HalfPlanes.dichotomies(&quad);
        // Opposite corners positive is unrealizable.
        assert!(!d.contains(&vec![true, false, true, false]));
        assert!(!d.contains(&vec![false, true, false, true]));
        assert_eq!(d.len(), 14); // 2^4 minus the two diagonal labelings
    }

    #[test]
    fn finite_table_restrictions() {
        // Four concepts over three points.
        let table = FiniteTable {
            rows: vec![
                vec![true, true, true],
                vec![false, true, true],
                vec![true, false, false],
                vec![false, false, false],
            ],
        };
        assert_eq!(table.dichotomies(&[0]).len(), 2);
        assert_eq!(table.dichotomies(&[0, 2]).len(), 4);
        let d23 = table.dichotomies(&[1, 2]);
        assert_eq!(d23.len(), 2);
        assert!(d23.contains(&vec![false, false]));
        assert!(d23.contains(&vec![true, true]));
    }
}
