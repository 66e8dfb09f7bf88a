//! Seminormalized Hadamard matrices over bit-packed ±1 vectors.
//!
//! A Hadamard matrix of order 4k with an all-ones first column has its other
//! 4k − 1 columns drawn from the balanced ("SH") vectors: exactly 2k entries
//! equal to −1. This crate enumerates those vectors, builds their
//! orthogonality graph, constructs Hadamard matrices by exhaustive, random
//! and annealing search, and compares exact counts against their estimates.
//!
//! ```
//! use shmat::{rvs_construct, SearchBudget};
//!
//! let out = rvs_construct(3, &SearchBudget::new(1_000_000, 10, 7)?)?;
//! assert!(out.matrix.as_qsh().is_hadamard());
//! # Ok::<(), shmat::Error>(())
//! ```

pub mod analysis;
mod error;
pub mod graph;
pub mod primitives;
mod scalar;
pub mod search;
pub mod vectorspace;

pub use error::{Error, Result};
pub use graph::{build_ortho_graph, find_cliques, CliqueBudget, OrthoGraph};
pub use primitives::{
    inner_product, is_orthogonal, GramMatrix, Permutation, QshMatrix, ShMatrix, ShVector,
    SignMatrix, SignVector, UnityVector,
};
pub use scalar::Real;
pub use search::{
    exhaustive_search, osa_construct, rvs_construct, AcceptanceRule, ExhaustiveStrategy,
    SearchBudget, ThresholdSchedule,
};
pub use vectorspace::{FamilyKind, VectorFamily};

/// Exact integer counts.
pub type Count = num_bigint::BigUint;
/// Exact rational probabilities.
pub type Ratio = num_rational::BigRational;

pub type ProbabilityReport = analysis::ProbabilityReport<f64>;
pub type ProbabilityReport32 = analysis::ProbabilityReport<f32>;
pub type LogBounds = analysis::LogBounds<f64>;
pub type DiscrepancyRow = analysis::DiscrepancyRow<f64>;
