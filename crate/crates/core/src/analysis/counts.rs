use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::combinatorics::{binomial, binomial_big, falling_factorial};
use crate::error::Error;

/// Number of inequivalent Hadamard matrices (equivalently, normalized ones up
/// to equivalence) of orders 4 through 32.
///
/// Orders 4–28 are the classical enumerations (Hall; Ito, Leon and Longyear;
/// Kimura; Spence). Order 32 is the count of Kharaghani and Tayfeh-Rezaie.
pub const KNOWN_NH_COUNTS: [(usize, u64); 8] = [
    (4, 1),
    (8, 1),
    (12, 1),
    (16, 5),
    (20, 3),
    (24, 60),
    (28, 487),
    (32, 13_710_027),
];

pub fn known_nh_count(order: usize) -> Option<u64> {
    KNOWN_NH_COUNTS
        .iter()
        .find(|&&(o, _)| o == order)
        .map(|&(_, n)| n)
}

/// Exact counts for order 4k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub k: usize,
    /// SH vectors: C(4k, 2k).
    #[serde(serialize_with = "decimal")]
    pub n_v: BigUint,
    /// SH vectors orthogonal to a given one: C(2k, k)².
    #[serde(serialize_with = "decimal")]
    pub n_o: BigUint,
    /// Ordered candidate matrices: N_V! / (N_V − (4k−1))!.
    #[serde(serialize_with = "decimal")]
    pub n_q: BigUint,
    /// Unordered candidate matrices: C(N_V, 4k−1).
    #[serde(serialize_with = "decimal")]
    pub n_qu: BigUint,
    /// Column negations of one normalized matrix: 2^(4k−1).
    #[serde(serialize_with = "decimal")]
    pub n_d: BigUint,
    #[serde(serialize_with = "decimal_opt")]
    pub n_nh: Option<BigUint>,
    /// N_NH · 2^(4k−1) where N_NH is known.
    #[serde(serialize_with = "decimal_opt")]
    pub n_sh: Option<BigUint>,
}

// Counts outgrow every JSON number type, so they serialize as decimal strings.
fn decimal<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn decimal_opt<S: serde::Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.collect_str(n),
        None => s.serialize_none(),
    }
}

pub fn n_v(k: usize) -> BigUint {
    binomial(4 * k as u64, 2 * k as u64).expect("r <= n")
}

pub fn n_o(k: usize) -> BigUint {
    binomial::<BigUint>(2 * k as u64, k as u64)
        .expect("r <= n")
        .pow(2)
}

pub fn n_d(k: usize) -> BigUint {
    BigUint::one() << (4 * k - 1)
}

pub fn n_qu(k: usize) -> BigUint {
    binomial_big(&n_v(k), 4 * k as u64 - 1).expect("N_V >= 4k - 1")
}

pub fn n_q(k: usize) -> BigUint {
    falling_factorial(&n_v(k), 4 * k as u64 - 1)
}

pub fn n_sh(k: usize) -> Option<BigUint> {
    known_nh_count(4 * k).map(|n| BigUint::from(n) * n_d(k))
}

pub fn count_report(k: usize) -> crate::Result<CountReport> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    Ok(CountReport {
        k,
        n_v: n_v(k),
        n_o: n_o(k),
        n_q: n_q(k),
        n_qu: n_qu(k),
        n_d: n_d(k),
        n_nh: known_nh_count(4 * k).map(BigUint::from),
        n_sh: n_sh(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn k1_counts() {
        let r = count_report(1).unwrap();
        assert_eq!(r.n_v, big(6));
        assert_eq!(r.n_o, big(4));
        assert_eq!(r.n_qu, big(20));
        assert_eq!(r.n_q, big(120));
        assert_eq!(r.n_d, big(8));
        assert_eq!(r.n_sh, Some(big(8)));
    }

    #[test]
    fn k2_and_k8_counts() {
        let r = count_report(2).unwrap();
        assert_eq!(r.n_v, big(70));
        assert_eq!(r.n_o, big(36));
        assert_eq!(r.n_sh, Some(big(128)));
        let r = count_report(8).unwrap();
        assert_eq!(r.n_sh, Some(big(13_710_027) << 31));
        assert_eq!(count_report(9).unwrap().n_sh, None);
        assert!(count_report(0).is_err());
    }

    #[test]
    fn ordered_is_unique_times_factorial() {
        for k in 1..=6 {
            let r = count_report(k).unwrap();
            let fact: BigUint = (1..=(4 * k as u64 - 1)).map(BigUint::from).product();
            assert_eq!(r.n_q, &r.n_qu * fact);
        }
    }

    #[test]
    fn known_table_round_trip() {
        assert_eq!(KNOWN_NH_COUNTS.len(), 8);
        for (order, nh) in KNOWN_NH_COUNTS {
            assert_eq!(n_sh(order / 4), Some(BigUint::from(nh) << (order - 1)));
        }
        assert_eq!(known_nh_count(36), None);
    }
}
