use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Inputs for a sample-complexity (or capacity) formula. Fill the fields
/// the chosen [`BoundKind`] needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub eps: f64,
    pub delta: f64,
    /// `|C|` for the finite-class bounds.
    pub class_size: Option<f64>,
    /// VC dimension for the consistency bound.
    pub vc_dim: Option<u64>,
    /// Leading constant of the consistency bound (left open as "some
    /// constant" in the analysis; 8 by default).
    pub c0: f64,
    /// Data radius for the margin capacity formula.
    pub radius: Option<f64>,
    /// Margin for the margin capacity formula.
    pub margin: Option<f64>,
    /// Ambient dimension for the margin capacity formula.
    pub ambient_dim: Option<u64>,
}

impl Default for BoundQuery {
    fn default() -> Self {
        Self {
            eps: 0.1,
            delta: 0.1,
            class_size: None,
            vc_dim: None,
            c0: 8.0,
            radius: None,
            margin: None,
            ambient_dim: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// `ceil( ln(|C|/delta) / eps )`: consistent learner, finite class.
    FiniteRealizable,
    /// `ceil( 2 ln(2|C|/delta) / eps^2 )`: empirical-risk minimizer.
    FiniteUnrealizable,
    /// `ceil( (4/eps) ln(4/delta) )`: tightest-fit rectangle learner.
    Rectangle,
    /// `ceil( c0 ( ln(1/delta)/eps + d ln(1/eps) * (1/eps) ) )`:
    /// consistent learner, VC dimension `d`.
    VcRealizable,
    /// `ceil( min(R^2/gamma^2, n) + 1 )`: VC dimension of margin-`gamma`
    /// hyperplanes over radius-`R` data — a capacity, not a sample size.
    MarginVc,
}

fn required<T: Copy>(field: Option<T>, name: &str) -> Result<T> {
    field.ok_or_else(|| Error::InvalidParameter(format!("bound kind needs `{name}`")))
}

/// Evaluates the closed-form bound for the given kind, rounded up to an
/// integer. Logarithms are natural.
pub fn sample_bound(query: &BoundQuery, kind: BoundKind) -> Result<u64> {
    if !(0.0..1.0).contains(&query.eps) || query.eps == 0.0 {
        return Err(Error::InvalidParameter("eps must lie in (0,1)".into()));
    }
    if !(0.0..1.0).contains(&query.delta) || query.delta == 0.0 {
        return Err(Error::InvalidParameter("delta must lie in (0,1)".into()));
    }
    let value = match kind {
        BoundKind::FiniteRealizable => {
            let c = required(query.class_size, "class_size")?;
            (c / query.delta).ln() / query.eps
        }
        BoundKind::FiniteUnrealizable => {
            let c = required(query.class_size, "class_size")?;
            2.0 * (2.0 * c / query.delta).ln() / (query.eps * query.eps)
        }
        BoundKind::Rectangle => 4.0 / query.eps * (4.0 / query.delta).ln(),
        BoundKind::VcRealizable => {
            let d = required(query.vc_dim, "vc_dim")? as f64;
            query.c0
                * ((1.0 / query.delta).ln() / query.eps
                    + d / query.eps * (1.0 / query.eps).ln())
        }
        BoundKind::MarginVc => {
            let r = required(query.radius, "radius")?;
            let gamma = required(query.margin, "margin")?;
            let n = required(query.ambient_dim, "ambient_dim")? as f64;
            if gamma <= 0.0 || r <= 0.0 {
                return Err(Error::InvalidParameter(
                    "radius and margin must be positive".into(),
                ));
            }
            (r * r / (gamma * gamma)).min(n) + 1.0
        }
    };
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bound evaluated to {value}"
        )));
    }
    Ok(value.ceil() as u64)
}
