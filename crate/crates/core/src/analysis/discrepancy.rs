use serde::Serialize;

use super::counts::n_sh;
use super::probability::{expected_h_log2, expected_h_log2_bounds, log2_big};
use crate::scalar::Real;

/// Modelled against actual counts for one order, all in log₂.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscrepancyRow<F> {
    pub k: usize,
    pub order: usize,
    pub expected_h: F,
    pub expected_h_lower: F,
    pub expected_h_upper: F,
    /// log₂ of the true number of SH matrices, where known.
    pub n_sh: Option<F>,
}

pub fn discrepancy_table<F: Real>(k_max: usize) -> Vec<DiscrepancyRow<F>> {
    (1..=k_max)
        .map(|k| {
            let (lo, hi) = expected_h_log2_bounds::<F>(k);
            DiscrepancyRow {
                k,
                order: 4 * k,
                expected_h: expected_h_log2(k),
                expected_h_lower: lo,
                expected_h_upper: hi,
                n_sh: n_sh(k).map(|n| log2_big(&n)),
            }
        })
        .collect()
}

/// Smallest k whose modelled expected count falls below one.
pub fn first_k_expected_below_one<F: Real>(rows: &[DiscrepancyRow<F>]) -> Option<usize> {
    rows.iter().find(|r| r.expected_h < F::zero()).map(|r| r.k)
}

/// Smallest k whose modelled expected count falls below the true count.
pub fn first_k_expected_below_actual<F: Real>(rows: &[DiscrepancyRow<F>]) -> Option<usize> {
    rows.iter()
        .find(|r| r.n_sh.is_some_and(|n| r.expected_h < n))
        .map(|r| r.k)
}

pub fn discrepancy_csv<F: Real>(rows: &[DiscrepancyRow<F>]) -> String {
    let mut out = String::from(
        "# shmat discrepancy v1\nk,order,log2_expected,log2_expected_lower,log2_expected_upper,log2_actual\n",
    );
    for r in rows {
        let actual = r.n_sh.map(|n| format!("{n:.6}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{}\n",
            r.k, r.order, r.expected_h, r.expected_h_lower, r.expected_h_upper, actual
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let rows = discrepancy_table::<f64>(10);
        assert_eq!(rows.len(), 10);
        assert!(rows[..8].iter().all(|r| r.n_sh.is_some()));
        assert!(rows[8..].iter().all(|r| r.n_sh.is_none()));
        assert_eq!(rows[0].n_sh, Some(3.0));
        assert!((rows[3].n_sh.unwrap() - (5f64.log2() + 15.0)).abs() < 1e-12);
        assert!(rows
            .iter()
            .all(|r| r.expected_h_lower <= r.expected_h_upper));
    }

    #[test]
    fn crossovers() {
        let rows = discrepancy_table::<f64>(8);
        assert_eq!(first_k_expected_below_one(&rows), Some(6));
        assert_eq!(first_k_expected_below_actual(&rows), Some(5));
    }

    #[test]
    fn csv_format() {
        let csv = discrepancy_csv(&discrepancy_table::<f64>(9));
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "# shmat discrepancy v1");
        assert_eq!(lines.len(), 11);
        assert!(lines[2].starts_with("1,4,"));
        assert!(lines[2].ends_with(",3.000000"));
        assert!(lines[10].ends_with(','));
    }
}
