use super::KernelSpec;
use crate::{Error, Result};

const DIM_GUARD: u128 = 1_000_000;

/// Explicit feature map of a polynomial kernel, so that
/// `<phi(x), phi(y)> = k(x, y)` coordinate for coordinate.
///
/// Homogeneous degree-`d` maps over `R^k` have one coordinate
/// `sqrt(multinomial(d; e)) * x^e` per exponent tuple `e` summing to `d`
/// (dimension `C(k+d-1, d)`); the inhomogeneous map adds a slot for
/// `sqrt(theta)` (dimension `C(k+d, d)`).
///
/// Coordinates are ordered by (1) total degree in the input variables,
/// descending; (2) the sorted exponent multiset, descending; (3) the
/// exponent tuple itself, descending lexicographically. For `k = d = 2`
/// this yields `(x1^2, x2^2, sqrt(2) x1 x2)` and, inhomogeneously,
/// `(..., sqrt(2 theta) x1, sqrt(2 theta) x2, sqrt(theta))`.
pub fn feature_map_poly(spec: &KernelSpec, x: &[f64]) -> Result<Vec<f64>> {
    spec.validate()?;
    let (degree, theta) = match *spec {
        KernelSpec::PolyHomogeneous { degree } => (degree, None),
        KernelSpec::PolyInhomogeneous { degree, theta } => (degree, Some(theta)),
        _ => {
            return Err(Error::InvalidParameter(
                "feature_map_poly needs a polynomial kernel".into(),
            ))
        }
    };
    if x.is_empty() {
        return Err(Error::EmptyInput("feature_map_poly"));
    }
    let k = x.len();
    let slots = if theta.is_some() { k + 1 } else { k };
    let dim = binomial(slots as u128 + degree as u128 - 1, degree as u128);
    if dim > DIM_GUARD {
        return Err(Error::FeatureDimGuard {
            dim,
            guard: DIM_GUARD,
        });
    }

    let mut tuples = Vec::with_capacity(dim as usize);
    compositions(degree, slots, &mut vec![0u32; slots], 0, &mut tuples);
    tuples.sort_by(|a, b| ordering_key(a, k).cmp(&ordering_key(b, k)));

    let d_factorial = factorial(degree as u128);
    let mut coords = Vec::with_capacity(tuples.len());
    for tuple in &tuples {
        let mut denom = 1u128;
        for &e in tuple {
            denom *= factorial(e as u128);
        }
        let coeff = ((d_factorial / denom) as f64).sqrt();
        let mut monomial = 1.0;
        for (i, &e) in tuple.iter().take(k).enumerate() {
            monomial *= x[i].powi(e as i32);
        }
        if let Some(t) = theta {
            let e = tuple[k];
            monomial *= t.powf(e as f64 / 2.0);
        }
        coords.push(coeff * monomial);
    }
    Ok(coords)
}

/// Sort key: total x-degree descending, exponent multiset descending,
/// tuple descending. `std` sorts ascending, so each part is negated via
/// `Reverse`-style encoding (we sort on the complement).
fn ordering_key(tuple: &[u32], k: usize) -> (i64, Vec<i64>, Vec<i64>) {
    let x_degree: u32 = tuple.iter().take(k).sum();
    let mut multiset: Vec<i64> = tuple.iter().map(|&e| -(e as i64)).collect();
    multiset.sort_unstable();
    (
        -(x_degree as i64),
        multiset,
        tuple.iter().map(|&e| -(e as i64)).collect(),
    )
}

/// All tuples of `slots` nonnegative integers summing to `degree`.
fn compositions(degree: u32, slots: usize, current: &mut Vec<u32>, idx: usize, out: &mut Vec<Vec<u32>>) {
    if idx == slots - 1 {
        current[idx] = degree;
        out.push(current.clone());
        return;
    }
    for e in (0..=degree).rev() {
        current[idx] = e;
        compositions(degree - e, slots, current, idx + 1, out);
    }
    current[idx] = 0;
}

fn factorial(n: u128) -> u128 {
    (1..=n).product::<u128>().max(1)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result = 1u128;
    for i in 0..k {
        result = result.saturating_mul(n - i) / (i + 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngState;
    use crate::svm::kernel_eval;
    use std::f64::consts::SQRT_2;

    #[test]
    fn homogeneous_2_2_matches_published_map() {
        let spec = KernelSpec::PolyHomogeneous { degree: 2 };
        let x = [3.0, 2.0];
        let phi = feature_map_poly(&spec, &x).unwrap();
        let expected = [9.0, 4.0, SQRT_2 * 6.0];
        assert_eq!(phi.len(), 3);
        for (a, b) in phi.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{phi:?} vs {expected:?}");
        }
    }

    #[test]
    fn inhomogeneous_2_2_matches_published_map() {
        let theta = 1.0;
        let spec = KernelSpec::PolyInhomogeneous { degree: 2, theta };
        let x = [3.0, 2.0];
        let phi = feature_map_poly(&spec, &x).unwrap();
        let expected = [
            9.0,
            4.0,
            SQRT_2 * 6.0,
            (2.0 * theta).sqrt() * 3.0,
            (2.0 * theta).sqrt() * 2.0,
            theta.sqrt(),
        ];
        assert_eq!(phi.len(), 6);
        for (a, b) in phi.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{phi:?} vs {expected:?}");
        }
    }

    #[test]
    fn dimensions_follow_the_binomial_counts() {
        // Homogeneous: C(k+d-1, d); inhomogeneous: C(k+d, d).
        let x3 = [0.5, -1.0, 2.0];
        let hom = feature_map_poly(&KernelSpec::PolyHomogeneous { degree: 3 }, &x3).unwrap();
        assert_eq!(hom.len(), 10); // C(5,3)
        let inhom =
            feature_map_poly(&KernelSpec::PolyInhomogeneous { degree: 3, theta: 0.5 }, &x3)
                .unwrap();
        assert_eq!(inhom.len(), 20); // C(6,3)
    }

    #[test]
    fn kernel_trick_consistency() {
        let mut rng = RngState::new(2024);
        for trial in 0..200 {
            let dims = 1 + rng.next_index(5);
            let degree = 1 + rng.next_index(4) as u32;
            let x: Vec<f64> = (0..dims).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let y: Vec<f64> = (0..dims).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let spec = if trial % 2 == 0 {
                KernelSpec::PolyHomogeneous { degree }
            } else {
                KernelSpec::PolyInhomogeneous {
                    degree,
                    theta: rng.next_f64() * 2.0,
                }
            };
            let phi_x = feature_map_poly(&spec, &x).unwrap();
            let phi_y = feature_map_poly(&spec, &y).unwrap();
            let inner: f64 = phi_x.iter().zip(&phi_y).map(|(a, b)| a * b).sum();
            let direct = kernel_eval(&spec, &x, &y).unwrap();
            let scale = direct.abs().max(1.0);
            assert!(
                (inner - direct).abs() <= 1e-9 * scale,
                "trial {trial}: {inner} vs {direct}"
            );
        }
    }

    #[test]
    fn guard_blocks_huge_maps() {
        let x = vec![1.0; 40];
        let spec = KernelSpec::PolyHomogeneous { degree: 8 };
        assert!(matches!(
            feature_map_poly(&spec, &x),
            Err(Error::FeatureDimGuard { .. })
        ));
    }

    #[test]
    fn non_polynomial_family_rejected() {
        assert!(feature_map_poly(&KernelSpec::Rbf { sigma: 1.0 }, &[1.0]).is_err());
    }
}
