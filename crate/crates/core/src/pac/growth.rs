use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::Concepts;
use crate::numerics::RngState;
use crate::{Error, Result};

const GROWTH_LIMIT: usize = 22;

/// `Phi_d(m)` by the recurrence
/// `Phi_d(m) = Phi_d(m-1) + Phi_{d-1}(m-1)`, `Phi_d(0) = Phi_0(m) = 1`.
pub fn phi_recurrence(d: usize, m: usize) -> BigUint {
    let mut row: Vec<BigUint> = vec![BigUint::from(1u32); m + 1]; // d = 0
    for _ in 1..=d {
        let mut next = vec![BigUint::from(1u32); m + 1];
        for mm in 1..=m {
            next[mm] = &next[mm - 1] + &row[mm - 1];
        }
        row = next;
    }
    row[m].clone()
}

/// `Phi_d(m)` as the binomial sum `sum_{i<=d} C(m, i)`.
pub fn phi_binomial(d: usize, m: usize) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut term = BigUint::from(1u32); // C(m, 0)
    for i in 0..=d {
        total += &term;
        if i >= m {
            break; // C(m, i) = 0 beyond i = m
        }
        term = term * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    total
}

/// `Phi_d(m)` computed by both routes, which must agree.
pub fn phi(d: usize, m: usize) -> Result<BigUint> {
    let by_recurrence = phi_recurrence(d, m);
    let by_sum = phi_binomial(d, m);
    if by_recurrence != by_sum {
        return Err(Error::NoConvergence(
            "phi",
            format!("routes disagree at d={d} m={m}: {by_recurrence} vs {by_sum}"),
        ));
    }
    Ok(by_recurrence)
}

/// Number of distinct dichotomies a concept class realizes on `points`.
/// Exhaustive, guarded at 22 points.
pub fn growth_count<C: Concepts>(class: &C, points: &[C::Point]) -> Result<u64> {
    if points.len() > GROWTH_LIMIT {
        return Err(Error::EnumerationGuard {
            got: points.len(),
            limit: GROWTH_LIMIT,
        });
    }
    Ok(class.dichotomies(points).len() as u64)
}

/// Largest `d <= d_max` such that some `d`-subset of the universe is
/// shattered, together with a witness subset. A lower bound on the VC
/// dimension by construction.
pub fn vcdim_bruteforce<C: Concepts>(
    class: &C,
    universe: &[C::Point],
    d_max: usize,
) -> Result<(usize, Vec<C::Point>)> {
    if universe.len() > GROWTH_LIMIT {
        return Err(Error::EnumerationGuard {
            got: universe.len(),
            limit: GROWTH_LIMIT,
        });
    }
    let mut best: (usize, Vec<C::Point>) = (0, Vec::new());
    let cap = d_max.min(universe.len());
    for d in (1..=cap).rev() {
        if let Some(witness) = find_shattered_subset(class, universe, d) {
            best = (d, witness);
            break;
        }
    }
    Ok(best)
}

fn find_shattered_subset<C: Concepts>(
    class: &C,
    universe: &[C::Point],
    d: usize,
) -> Option<Vec<C::Point>> {
    let mut indices: Vec<usize> = (0..d).collect();
    loop {
        let subset: Vec<C::Point> = indices.iter().map(|&i| universe[i].clone()).collect();
        if class.dichotomies(&subset).len() == 1usize << d {
            return Some(subset);
        }
        // Next combination in lexicographic order.
        let mut i = d;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if indices[i] != i + universe.len() - d {
                break;
            }
        }
        if indices[i] == i + universe.len() - d {
            return None;
        }
        indices[i] += 1;
        for j in (i + 1)..d {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// One growth-vs-bound row of a Sauer check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SauerRow {
    pub m: usize,
    /// Largest dichotomy count found over the sampled point sets.
    pub max_growth: u64,
    /// `Phi_d(m)` as a decimal string (kept exact).
    pub phi: String,
    pub holds: bool,
    /// Polynomial cap `(em/d)^d` for `m > d`, with its own verdict.
    pub polynomial_cap: Option<f64>,
    pub cap_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SauerReport {
    pub class: String,
    pub d: usize,
    pub rows: Vec<SauerRow>,
    pub all_hold: bool,
}

/// Samples point sets of each size in `m_range` and checks the growth
/// bound `Pi_C(S) <= Phi_d(m)` plus the polynomial cap
/// `Phi_d(m) <= (em/d)^d` for `m > d`.
pub fn sauer_check<C: Concepts>(
    class: &C,
    d: usize,
    m_range: std::ops::RangeInclusive<usize>,
    sets_per_size: usize,
    seed: u64,
) -> Result<SauerReport> {
    let mut rows = Vec::new();
    let base = RngState::new(seed);
    for m in m_range {
        if m > GROWTH_LIMIT {
            return Err(Error::EnumerationGuard {
                got: m,
                limit: GROWTH_LIMIT,
            });
        }
        let mut max_growth = 0u64;
        for set_index in 0..sets_per_size.max(1) {
            let mut rng = base.derive((m as u64) << 32 | set_index as u64);
            let points = class.random_points(m, &mut rng);
            max_growth = max_growth.max(growth_count(class, &points)?);
        }
        let bound = phi(d, m)?;
        let holds = BigUint::from(max_growth) <= bound;
        let (polynomial_cap, cap_holds) = if m > d && d > 0 {
            let cap = (std::f64::consts::E * m as f64 / d as f64).powi(d as i32);
            let bound_f = bound.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            (Some(cap), Some(bound_f <= cap))
        } else {
            (None, None)
        };
        rows.push(SauerRow {
            m,
            max_growth,
            phi: bound.to_string(),
            holds,
            polynomial_cap,
            cap_holds,
        });
    }
    let all_hold = rows
        .iter()
        .all(|r| r.holds && r.cap_holds.unwrap_or(true));
    Ok(SauerReport {
        class: class.name().to_string(),
        d,
        rows,
        all_hold,
    })
}
