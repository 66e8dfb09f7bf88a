use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::counts::{n_o, n_qu, n_v};
use crate::scalar::Real;

/// log₂ of a positive big integer, accurate to the float's precision.
pub fn log2_big<F: Real>(n: &BigUint) -> F {
    assert!(!n.is_zero(), "log2 of zero");
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_u64().expect("at most 64 bits");
    F::of(top as f64).log2() + F::of(shift as f64)
}

pub fn log2_ratio<F: Real>(r: &BigRational) -> F {
    let num = r.numer().to_biguint().expect("positive ratio");
    let den = r.denom().to_biguint().expect("positive ratio");
    log2_big::<F>(&num) - log2_big::<F>(&den)
}

/// Probability that two distinct uniformly random SH vectors are
/// orthogonal: C(2k,k)² / (C(4k,2k) − 1).
pub fn p_perp(k: usize) -> BigRational {
    assert!(k >= 1, "k must be at least 1");
    let num = BigInt::from(n_o(k));
    let den = BigInt::from(n_v(k)) - BigInt::one();
    BigRational::new(num, den)
}

/// `(1/(2√k), √(2/k))`. The upper end exceeds 1 for k = 1.
pub fn p_perp_bounds<F: Real>(k: usize) -> (F, F) {
    let k = F::of(k as f64);
    let two = F::of(2.0);
    (F::one() / (two * k.sqrt()), (two / k).sqrt())
}

/// Number of pairwise orthogonality conditions among the 4k − 1 SH columns.
pub fn pair_count(k: usize) -> u64 {
    let q = 4 * k as u64 - 1;
    q * (q - 1) / 2
}

/// log₂ of the modelled probability that a random candidate is Hadamard,
/// p⊥ raised to the number of column pairs.
pub fn p_h_given_q_log2<F: Real>(k: usize) -> F {
    F::of(pair_count(k) as f64) * log2_ratio::<F>(&p_perp(k))
}

/// log₂ E[H] along the exact path: p_{H|Q} · C(N_V, 4k−1).
pub fn expected_h_log2<F: Real>(k: usize) -> F {
    p_h_given_q_log2::<F>(k) + log2_big::<F>(&n_qu(k))
}

/// The closed-form bounds on log₂ E[H]:
/// `8k²−14k − (4k²+6k)·log₂k` and `20k²−12k − (4k²+6k)·log₂k`.
pub fn expected_h_log2_bounds<F: Real>(k: usize) -> (F, F) {
    log2_bounds(k, BoundForm::Simplified).expected_h.into()
}

/// Which algebraic form of the asymptotic bounds to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundForm {
    /// The large-k closed forms, e.g. `(4k)^(−4k²)` for p_{H|Q}.
    Simplified,
    /// The approximation inequalities applied with exact exponents such as
    /// `(4k−1)(4k−2)/2`.
    Unsimplified,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bound<F> {
    pub lower: F,
    pub upper: F,
}

impl<F: Real> Bound<F> {
    pub fn contains(&self, x: F) -> bool {
        self.lower <= x && x <= self.upper
    }
}

impl<F> From<Bound<F>> for (F, F) {
    fn from(b: Bound<F>) -> (F, F) {
        (b.lower, b.upper)
    }
}

/// log₂ bounds on every estimated quantity for one k.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogBounds<F> {
    pub n_o: Bound<F>,
    pub n_v: Bound<F>,
    pub p_perp: Bound<F>,
    pub p_h_given_q: Bound<F>,
    pub n_qu: Bound<F>,
    pub expected_h: Bound<F>,
}

/// Bounds built from the three standard estimates
///
/// ```text
/// (p/q)^q ≤ C(p,q) ≤ (e·p/q)^q
/// 2^(2p)/(2√p) ≤ C(2p,p) ≤ 2^(2p)/√(2p)
/// (p/e)^p ≤ p! ≤ e·p·(p/e)^p
/// ```
pub fn log2_bounds<F: Real>(k: usize, form: BoundForm) -> LogBounds<F> {
    let c = |x: f64| F::of(x);
    let kf = c(k as f64);
    let lg = |x: F| x.log2();
    let four_k = c(4.0) * kf;
    let q = four_k - F::one();
    let pairs = c(pair_count(k) as f64);

    // N_O = C(2k,k)², N_V = C(4k,2k), both from the central binomial estimate.
    let n_o = Bound {
        lower: four_k - lg(four_k),
        upper: four_k - lg(c(2.0) * kf),
    };
    let n_v = Bound {
        lower: four_k - lg(c(2.0) * (c(2.0) * kf).sqrt()),
        upper: four_k - lg(four_k.sqrt()),
    };

    match form {
        BoundForm::Simplified => {
            let (pl, pu) = p_perp_bounds::<F>(k);
            let k2 = kf * kf;
            let common = (c(4.0) * k2 + c(6.0) * kf) * lg(kf);
            LogBounds {
                n_o,
                n_v,
                p_perp: Bound {
                    lower: lg(pl),
                    upper: lg(pu),
                },
                p_h_given_q: Bound {
                    lower: -c(4.0) * k2 * lg(four_k),
                    upper: F::zero() - c(4.0) * k2 * lg(kf / c(2.0)),
                },
                n_qu: Bound {
                    lower: four_k * (four_k - lg(c(8.0) * c(2.0).sqrt() * kf.powf(c(1.5)))),
                    upper: four_k * (four_k - lg(c(8.0) * kf.powf(c(1.5)))),
                },
                expected_h: Bound {
                    lower: c(8.0) * k2 - c(14.0) * kf - common,
                    upper: c(20.0) * k2 - c(12.0) * kf - common,
                },
            }
        }
        BoundForm::Unsimplified => {
            // p⊥ = N_O/(N_V − 1): lower via N_O,LB/N_V,UB, upper via
            // N_O,UB/(N_V,LB − 1).
            let nv_lb = c(2.0).powf(n_v.lower);
            let p_perp = Bound {
                lower: n_o.lower - n_v.upper,
                upper: n_o.upper - lg(nv_lb - F::one()),
            };
            let p_h_given_q = Bound {
                lower: pairs * p_perp.lower,
                upper: pairs * p_perp.upper,
            };
            let e = F::E();
            let n_qu = Bound {
                lower: q * (n_v.lower - lg(q)),
                upper: q * (lg(e) + n_v.upper - lg(q)),
            };
            LogBounds {
                n_o,
                n_v,
                p_perp,
                p_h_given_q,
                n_qu,
                expected_h: Bound {
                    lower: p_h_given_q.lower + n_qu.lower,
                    upper: p_h_given_q.upper + n_qu.upper,
                },
            }
        }
    }
}

/// Exact probabilities and their estimates for one k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityReport<F> {
    pub k: usize,
    #[serde(serialize_with = "ratio_as_string")]
    pub p_perp: BigRational,
    pub p_perp_log2: F,
    pub p_perp_bounds: (F, F),
    pub p_h_given_q_log2: F,
    pub p_h_given_q_bounds_log2: (F, F),
    pub expected_h_log2: F,
    pub expected_h_log2_bounds: (F, F),
    pub unsimplified: LogBounds<F>,
}

fn ratio_as_string<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn probability_report<F: Real>(k: usize) -> ProbabilityReport<F> {
    let simplified = log2_bounds::<F>(k, BoundForm::Simplified);
    let p = p_perp(k);
    ProbabilityReport {
        k,
        p_perp_log2: log2_ratio(&p),
        p_perp: p,
        p_perp_bounds: p_perp_bounds(k),
        p_h_given_q_log2: p_h_given_q_log2(k),
        p_h_given_q_bounds_log2: simplified.p_h_given_q.into(),
        expected_h_log2: expected_h_log2(k),
        expected_h_log2_bounds: simplified.expected_h.into(),
        unsimplified: log2_bounds(k, BoundForm::Unsimplified),
    }
}
