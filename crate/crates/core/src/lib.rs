//! Exact determinant identities for sums of matrices over commutative rings.
//!
//! The crate evaluates the alternating subset sum
//! `sum_{S subset [m]} (-1)^|S| det(sum_{i in S} A_i)`, which vanishes whenever
//! the family is larger than the matrix size, both symbolically (over generic
//! matrices in `Z[x]`) and numerically over any supported ring. On top of that
//! it searches for small invertible subset sums, computes the ideal chain of
//! subset-sum determinants over `Z` and `Z/N`, and builds and mines the
//! counterexamples that appear over non-local and mixed-characteristic rings.

pub mod cli;
pub mod error;
pub mod identities;
pub mod mask;
pub mod matrix;
pub mod ring;
pub mod sample;
pub mod search;

pub use error::{Error, Result};
pub use mask::SubsetMask;
pub use matrix::{subset_sum, DetAlgorithm, SquareMatrix};
pub use ring::{poly_eval, RingDescriptor, RingElement, RingKind, SparsePoly, Value};
