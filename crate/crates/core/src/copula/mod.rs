//! Copula models, exact bivariate computations and Monte Carlo estimation.

mod model;
mod monte_carlo;
mod order_d;
mod shuffle;
mod verify;

pub use model::{order_transform_point, CopulaModel, SamplePoint};
pub use monte_carlo::{
    estimate_bracket, estimate_kendall_curve, kappa_estimate, Estimate, KendallCurve, McConfig, Transform, CHUNK_SIZE,
};
pub use order_d::{d_marginals, eval_d_order_transform, h_d_order};
pub use shuffle::{Segment, Shuffle};
pub use verify::{default_grid, verify_order_theorems, ONE_SIDED_SIGMA, VALUE_SIGMA};
