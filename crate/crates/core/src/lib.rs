//! Exact and Monte Carlo computation of Kendall's tau for copulas and for the
//! copulas of their order statistics.
//!
//! The crate has two halves. The exact half ([`exact`], [`product_order`],
//! [`appendix`]) works entirely in big rationals: sparse multivariate
//! polynomials are integrated over the ordered simplex
//! `{u : u_1 <= ... <= u_d}` to obtain brackets `[C, C]` and Kendall's tau of
//! the order transform of the product copula and of its margins. The
//! stochastic half ([`copula`]) samples copulas, estimates brackets and
//! Kendall distribution functions by Monte Carlo with deterministic parallel
//! substreams, and computes exact brackets for bivariate shuffles of `M`.
//!
//! ```
//! use kendall_order::product_order::{bracket_margin, kappa_from_bracket, SubsetK};
//! use num_rational::BigRational;
//!
//! let k = SubsetK::new(5, vec![1, 2, 3, 5]).unwrap();
//! let bracket = bracket_margin(&k).unwrap();
//! assert_eq!(bracket, BigRational::new(47.into(), 252.into()));
//! let tau = kappa_from_bracket(&bracket, 4).unwrap();
//! assert_eq!(tau, BigRational::new(125.into(), 441.into()));
//! ```

pub mod appendix;
pub mod cli;
pub mod copula;
mod error;
pub mod exact;
pub mod product_order;
pub mod report;

pub use error::{Error, Result};
pub use num_rational::BigRational;
