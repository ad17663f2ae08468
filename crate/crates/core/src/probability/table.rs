use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Discrete joint distribution (or count table) over measurement values
/// `x` and class labels `h`. Rows index `h`, columns index `x`.
///
/// Count tables keep exact integer cell values (stored in `f64`, exact up to
/// 2^53) and derive probabilities on demand with a single division, so the
/// classic worked-example fractions come out bit-exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    x_values: Vec<String>,
    h_values: Vec<String>,
    /// Row-major, `h_values.len() x x_values.len()`.
    cells: Vec<f64>,
}

impl JointTable {
    pub fn from_counts(
        x_values: Vec<String>,
        h_values: Vec<String>,
        counts: Vec<u64>,
    ) -> Result<Self> {
        if x_values.is_empty() || h_values.is_empty() {
            return Err(Error::EmptyInput("joint table labels"));
        }
        if counts.len() != x_values.len() * h_values.len() {
            return Err(Error::Shape(format!(
                "table needs {} cells, got {}",
                x_values.len() * h_values.len(),
                counts.len()
            )));
        }
        Ok(Self {
            x_values,
            h_values,
            cells: counts.into_iter().map(|c| c as f64).collect(),
        })
    }

    pub fn from_probabilities(
        x_values: Vec<String>,
        h_values: Vec<String>,
        cells: Vec<f64>,
    ) -> Result<Self> {
        if x_values.is_empty() || h_values.is_empty() {
            return Err(Error::EmptyInput("joint table labels"));
        }
        if cells.len() != x_values.len() * h_values.len() {
            return Err(Error::Shape("cell count mismatch".into()));
        }
        if cells.iter().any(|&c| c < 0.0 || !c.is_finite()) {
            return Err(Error::InvalidParameter("cells must be nonnegative".into()));
        }
        let total: f64 = cells.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probability cells must sum to 1, got {total}"
            )));
        }
        Ok(Self {
            x_values,
            h_values,
            cells,
        })
    }

    /// Parses the CSV interchange format: a header row of x labels, then one
    /// row per h label holding integer counts.
    ///
    /// ```text
    /// h,x1,x2,x3,x4,x5
    /// h1,2,5,4,2,1
    /// h2,0,0,3,3,2
    /// ```
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::EmptyInput("table csv"))?;
        let mut header_fields = header.split(',').map(str::trim);
        header_fields.next(); // corner cell (name of the h column)
        let x_values: Vec<String> = header_fields.map(String::from).collect();
        if x_values.is_empty() {
            return Err(Error::EmptyInput("table csv header"));
        }
        let mut h_values = Vec::new();
        let mut counts = Vec::new();
        for line in lines {
            let mut fields = line.split(',').map(str::trim);
            let label = fields.next().ok_or_else(|| {
                Error::InvalidParameter("table csv row missing label".into())
            })?;
            h_values.push(label.to_string());
            let row: Vec<u64> = fields
                .map(|f| {
                    f.parse::<u64>().map_err(|_| {
                        Error::InvalidParameter(format!("cell '{f}' is not an integer count"))
                    })
                })
                .collect::<Result<_>>()?;
            if row.len() != x_values.len() {
                return Err(Error::Shape(format!(
                    "row '{label}' has {} cells, expected {}",
                    row.len(),
                    x_values.len()
                )));
            }
            counts.extend(row);
        }
        Self::from_counts(x_values, h_values, counts)
    }

    pub fn x_values(&self) -> &[String] {
        &self.x_values
    }

    pub fn h_values(&self) -> &[String] {
        &self.h_values
    }

    pub fn x_index(&self, label: &str) -> Option<usize> {
        self.x_values.iter().position(|v| v == label)
    }

    pub fn h_index(&self, label: &str) -> Option<usize> {
        self.h_values.iter().position(|v| v == label)
    }

    pub fn cell(&self, h: usize, x: usize) -> f64 {
        self.cells[h * self.x_values.len() + x]
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    fn row_sum(&self, h: usize) -> f64 {
        (0..self.x_values.len()).map(|x| self.cell(h, x)).sum()
    }

    fn col_sum(&self, x: usize) -> f64 {
        (0..self.h_values.len()).map(|h| self.cell(h, x)).sum()
    }
}

/// Row and column marginals of a joint table.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    /// P(h_j): prior over class labels.
    pub prior: Vec<f64>,
    /// P(x_i): evidence over measurement values.
    pub evidence: Vec<f64>,
}

/// Marginalizes a joint table into the prior over `h` and the evidence over
/// `x`. Both outputs sum to one.
pub fn marginals(t: &JointTable) -> Result<Marginals> {
    let total = t.total();
    if total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    let prior = (0..t.h_values.len()).map(|h| t.row_sum(h) / total).collect();
    let evidence = (0..t.x_values.len()).map(|x| t.col_sum(x) / total).collect();
    Ok(Marginals { prior, evidence })
}

/// Which variable is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// P(h | x): each x-column sums to one.
    GivenX,
    /// P(x | h): each h-row sums to one.
    GivenH,
}

/// A conditional table with the same layout as the source joint table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    pub conditioning: Conditioning,
    pub x_values: Vec<String>,
    pub h_values: Vec<String>,
    /// Row-major `h x x`; the normalized slices depend on `conditioning`.
    pub values: Vec<f64>,
}

impl ConditionalTable {
    pub fn value(&self, h: usize, x: usize) -> f64 {
        self.values[h * self.x_values.len() + x]
    }

    /// P(h | x = column) as a vector over h.
    pub fn column(&self, x: usize) -> Vec<f64> {
        (0..self.h_values.len()).map(|h| self.value(h, x)).collect()
    }

    /// P(x | h = row) as a vector over x.
    pub fn row(&self, h: usize) -> Vec<f64> {
        (0..self.x_values.len()).map(|x| self.value(h, x)).collect()
    }
}

/// Conditions a joint table on one of its variables. Every conditioned
/// slice of the result sums to one; conditioning on a zero-mass value is an
/// error naming that value.
pub fn conditional(t: &JointTable, conditioning: Conditioning) -> Result<ConditionalTable> {
    let (s, k) = (t.h_values.len(), t.x_values.len());
    let mut values = vec![0.0; s * k];
    match conditioning {
        Conditioning::GivenX => {
            for x in 0..k {
                let mass = t.col_sum(x);
                if mass <= 0.0 {
                    return Err(Error::ZeroConditioningMass(t.x_values[x].clone()));
                }
                for h in 0..s {
                    values[h * k + x] = t.cell(h, x) / mass;
                }
            }
        }
        Conditioning::GivenH => {
            for h in 0..s {
                let mass = t.row_sum(h);
                if mass <= 0.0 {
                    return Err(Error::ZeroConditioningMass(t.h_values[h].clone()));
                }
                for x in 0..k {
                    values[h * k + x] = t.cell(h, x) / mass;
                }
            }
        }
    }
    Ok(ConditionalTable {
        conditioning,
        x_values: t.x_values.clone(),
        h_values: t.h_values.clone(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The worked two-class BMI table: rows h1, h2 over five x values.
    pub(crate) fn bmi_table() -> JointTable {
        JointTable::from_counts(
            vec!["x1".into(), "x2".into(), "x3".into(), "x4".into(), "x5".into()],
            vec!["h1".into(), "h2".into()],
            vec![2, 5, 4, 2, 1, 0, 0, 3, 3, 2],
        )
        .unwrap()
    }

    #[test]
    fn golden_marginals() {
        let m = marginals(&bmi_table()).unwrap();
        assert_eq!(m.prior[0], 14.0 / 22.0);
        assert_eq!(m.prior[1], 8.0 / 22.0);
        assert_eq!(m.evidence[2], 7.0 / 22.0);
        assert!((m.prior.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((m.evidence.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn golden_conditionals() {
        let t = bmi_table();
        let given_x = conditional(&t, Conditioning::GivenX).unwrap();
        assert_eq!(given_x.value(1, 2), 3.0 / 7.0); // P(h2 | x3)
        let given_h = conditional(&t, Conditioning::GivenH).unwrap();
        assert_eq!(given_h.value(1, 2), 3.0 / 8.0); // P(x3 | h2)
    }

    #[test]
    fn all_ones_marginals_are_uniform() {
        let t = JointTable::from_counts(
            vec!["a".into(), "b".into()],
            vec!["u".into(), "v".into()],
            vec![1, 1, 1, 1],
        )
        .unwrap();
        let m = marginals(&t).unwrap();
        assert_eq!(m.prior, vec![0.5, 0.5]);
        assert_eq!(m.evidence, vec![0.5, 0.5]);
    }

    #[test]
    fn independent_table_posterior_equals_prior() {
        // Rank-1 table: cell = row_weight * col_weight.
        let rows = [2u64, 6];
        let cols = [1u64, 3, 4];
        let counts: Vec<u64> = rows
            .iter()
            .flat_map(|r| cols.iter().map(move |c| r * c))
            .collect();
        let t = JointTable::from_counts(
            vec!["x1".into(), "x2".into(), "x3".into()],
            vec!["h1".into(), "h2".into()],
            counts,
        )
        .unwrap();
        let prior = marginals(&t).unwrap().prior;
        let cond = conditional(&t, Conditioning::GivenX).unwrap();
        for x in 0..3 {
            for h in 0..2 {
                assert!((cond.value(h, x) - prior[h]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn conditioning_on_zero_mass_names_value() {
        let t = JointTable::from_counts(
            vec!["x1".into(), "x2".into()],
            vec!["h1".into()],
            vec![3, 0],
        )
        .unwrap();
        match conditional(&t, Conditioning::GivenX) {
            Err(Error::ZeroConditioningMass(v)) => assert_eq!(v, "x2"),
            other => panic!("expected zero-mass error, got {other:?}"),
        }
    }

    #[test]
    fn zero_total_mass_rejected() {
        let t = JointTable::from_counts(
            vec!["x".into()],
            vec!["h".into()],
            vec![0],
        )
        .unwrap();
        assert!(matches!(marginals(&t), Err(Error::ZeroMass)));
    }

    #[test]
    fn csv_roundtrip() {
        let text = "h,x1,x2,x3,x4,x5\nh1,2,5,4,2,1\nh2,0,0,3,3,2\n";
        let t = JointTable::from_csv_str(text).unwrap();
        assert_eq!(t, bmi_table());
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        assert!(JointTable::from_csv_str("h,x1,x2\nh1,1\n").is_err());
        assert!(JointTable::from_csv_str("h,x1\nh1,notanumber\n").is_err());
    }

    #[test]
    fn conditional_slices_sum_to_one() {
        let t = bmi_table();
        let gx = conditional(&t, Conditioning::GivenX).unwrap();
        for x in 0..5 {
            let s: f64 = gx.column(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let gh = conditional(&t, Conditioning::GivenH).unwrap();
        for h in 0..2 {
            let s: f64 = gh.row(h).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
