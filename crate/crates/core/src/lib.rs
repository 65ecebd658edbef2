//! Exact-arithmetic invariants of quadratic irrationals, hyperbolic integer
//! matrices, Cuntz-Krieger algebras and elliptic curves over prime fields.
//!
//! Every computation is carried out over the integers, the rationals or a
//! real quadratic field; nothing in the library rounds.

pub mod arith;
pub mod cli;
pub mod contfrac;
pub mod error;
pub mod exact;
pub mod invariants;
pub mod jacobi_perron;
pub mod ktheory;

pub use error::{Error, Result};
pub use exact::{IntMatrix, IntPolynomial, QuadExt};
