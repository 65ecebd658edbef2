//! Periodic continued fractions of quadratic surds and what is built on
//! them: the Gauss period method for hyperbolic 2x2 matrices, fundamental
//! units of real quadratic orders, Muir continuants and the radicand
//! equation for palindromic periods.

mod gauss;
mod muir;
mod periodic;
mod surd;
mod units;

pub(crate) use gauss::hyperbolic_discriminant;
pub use gauss::{fixed_point, gauss_similar, matrix_from_period, Similarity, SimilarityVerdict};
pub use muir::{
    classify_period, muir_symbols, symmetric_period_radicand, MuirTable, PeriodKind, PeriodShape,
    RadicandForm, RadicandSolution,
};
pub use periodic::{cf_expand, cf_expand_sqrt, PeriodicCF};
pub use surd::QuadSurd;
pub use units::{fundamental_unit, in_order, omega, order_coords};
