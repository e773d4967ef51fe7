//! Exact dense linear algebra over the rationals.
//!
//! Every rank and determinant decision in the crate goes through this module; there is
//! no floating point anywhere on those paths.

mod elim;
mod matrix;
mod star;

pub use elim::{coker_projection, det, inverse, is_invertible, kernel_basis, rank, rref, solve};
pub use matrix::{format_rational, parse_rational, rat, ratio, RMatrix, Rational};
pub use star::{eval_pencil, linear_combination, star};
