//! Exact counts, orthogonality probabilities and their asymptotic estimates.

pub mod combinatorics;
mod counts;
mod degeneration;
mod discrepancy;
mod probability;

pub use counts::{
    count_report, known_nh_count, n_d, n_o, n_q, n_qu, n_sh, n_v, CountReport, KNOWN_NH_COUNTS,
};
pub use degeneration::{
    degenerate, degenerate_with_cap, normalize, seminormalize, DEFAULT_DEGENERATION_CAP,
};
pub use discrepancy::{
    discrepancy_csv, discrepancy_table, first_k_expected_below_actual, first_k_expected_below_one,
    DiscrepancyRow,
};
pub use probability::{
    expected_h_log2, expected_h_log2_bounds, log2_big, log2_bounds, log2_ratio, p_h_given_q_log2,
    p_perp, p_perp_bounds, pair_count, probability_report, Bound, BoundForm, LogBounds,
    ProbabilityReport,
};
