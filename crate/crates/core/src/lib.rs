//! Finite-field toolkit for zero-sum subspaces of F_{2^n}.
//!
//! A k-dimensional F_2-subspace E of F_{2^n} is zero-sum when the inverses
//! of its nonzero elements add up to zero. The crate provides the field
//! arithmetic, the symbolic and pointwise criterion polynomials, the
//! subspace operator calculus, exhaustive censuses, and a derivation
//! ledger for classifying which dimensions admit such subspaces.

pub mod bitlinalg;
pub mod error;
pub mod gf2n;
pub mod ledger;
pub mod pointeval;
pub mod subcalc;
pub mod sympoly;
pub mod zerosum;

pub use bitlinalg::{gaussian_binomial, gl2_order, BitMatrix, Subspace, SubspaceEnumerator};
pub use error::Error;
pub use gf2n::{DlogTable, Fe, FieldOps, FieldSpec};
pub use sympoly::MPoly;
