//! Bit-packed ±1 vectors and matrices with exact integer inner products.

mod matrix;
mod permutation;
mod vector;

pub use matrix::{GramMatrix, QshMatrix, ShMatrix, SignMatrix};
pub use permutation::{Permutation, Permute};
pub use vector::{inner_product, is_orthogonal, ShVector, SignVector, UnityVector, MAX_ORDER};
