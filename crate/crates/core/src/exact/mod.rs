//! Exact scalar arithmetic, sparse polynomials and iterated integration over
//! the ordered simplex.
//!
//! Variables are numbered from 1 in the public API and in error messages:
//! `u_1` is the innermost integration variable.

mod poly;
mod rational;
mod simplex;

pub use poly::{ExponentVector, PolyF64, SparsePoly, Substitution};
pub use rational::{
    binomial, binomial_general, factorial, format_rational, parse_rational, parse_rational_exact, rat, to_f64,
};
pub use simplex::{integrate_last_to_one, integrate_var_to_next, partial_simplex_integral, simplex_integral};
