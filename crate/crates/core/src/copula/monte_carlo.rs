//! Monte Carlo estimators with reproducible parallelism.
//!
//! Work is cut into fixed chunks of [`CHUNK_SIZE`] trials. Chunk `c` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` on stream `c`, and chunks only
//! return integer counts, so the reduction is exact and the result does not
//! depend on how rayon schedules chunks or on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::model::{CopulaModel, PreparedModel};
use crate::product_order::SubsetK;
use crate::{Error, Result};

pub const CHUNK_SIZE: u64 = 4096;
pub const MIN_BRACKET_SAMPLES: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    None,
    Order,
}

impl Transform {
    pub fn as_str(self) -> &'static str {
        match self {
            Transform::None => "none",
            Transform::Order => "order",
        }
    }
}

impl std::str::FromStr for Transform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Transform::None),
            "order" => Ok(Transform::Order),
            _ => Err(Error::Parse(format!("unknown transform `{s}` (none|order)"))),
        }
    }
}

/// Sample size, seed and optional thread count of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub n: u64,
    pub seed: u64,
    /// `None` uses rayon's global pool. Never affects results.
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        Self { n, seed, threads: None }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
    pub transform: Transform,
    pub margin: Option<SubsetK>,
}

/// Runs `chunk(rng, trials)` for every chunk and folds the results with
/// `combine`, which must be associative and commutative.
fn run_chunked<T, F, G>(cfg: &McConfig, chunk: F, combine: G, identity: T) -> Result<T>
where
    T: Send + Sync + Clone,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync + Send,
    G: Fn(T, T) -> T + Sync + Send,
{
    let chunks = cfg.n.div_ceil(CHUNK_SIZE);
    let work = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(c);
                let trials = CHUNK_SIZE.min(cfg.n - c * CHUNK_SIZE);
                chunk(&mut rng, trials)
            })
            .reduce(|| identity.clone(), &combine)
    };
    match cfg.threads {
        None => Ok(work()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

fn binomial_se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

/// Estimates `[C, C] = P(V <= U)` for independent `U, V ~ Q^C` from `n`
/// disjoint pairs.
///
/// With [`Transform::Order`] both points are sorted first, which estimates
/// `[C_T, C_T]`; with a margin `K` only the coordinates in `K` are compared.
pub fn estimate_bracket(
    model: &CopulaModel,
    cfg: &McConfig,
    transform: Transform,
    margin: Option<&SubsetK>,
) -> Result<Estimate> {
    if cfg.n < MIN_BRACKET_SAMPLES {
        return Err(Error::OutOfRange {
            what: "n",
            value: cfg.n as i64,
            range: format!(">= {MIN_BRACKET_SAMPLES}"),
        });
    }
    let d = model.dimension();
    if let Some(k) = margin {
        if k.dimension() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: k.dimension(),
            });
        }
    }
    let prepared = PreparedModel::new(model)?;
    let coords: Vec<usize> = match margin {
        Some(k) => k.members().iter().map(|m| m - 1).collect(),
        None => (0..d).collect(),
    };
    let hits = run_chunked(
        cfg,
        |rng, trials| {
            let mut u = vec![0.0; d];
            let mut v = vec![0.0; d];
            let mut count = 0u64;
            for _ in 0..trials {
                prepared.sample_into(rng, &mut u);
                prepared.sample_into(rng, &mut v);
                if transform == Transform::Order {
                    u.sort_by(f64::total_cmp);
                    v.sort_by(f64::total_cmp);
                }
                if coords.iter().all(|&i| v[i] <= u[i]) {
                    count += 1;
                }
            }
            count
        },
        |a, b| a + b,
        0,
    )?;
    let value = hits as f64 / cfg.n as f64;
    Ok(Estimate {
        value,
        std_error: binomial_se(value, cfg.n),
        n: cfg.n,
        seed: cfg.seed,
        transform,
        margin: margin.cloned(),
    })
}

/// Kendall's tau from a bracket estimate of an `m`-variate copula, with its
/// standard error: `(2^m B - 1) / (2^{m-1} - 1)`.
pub fn kappa_estimate(bracket: &Estimate, m: usize) -> (f64, f64) {
    let scale = 2f64.powi(m as i32);
    let den = 2f64.powi(m as i32 - 1) - 1.0;
    ((scale * bracket.value - 1.0) / den, scale * bracket.std_error / den)
}

/// Empirical Kendall distribution function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KendallCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub n: u64,
    pub seed: u64,
    pub transform: Transform,
}

impl KendallCurve {
    /// Binomial standard error at grid point `i`.
    pub fn std_error(&self, i: usize) -> f64 {
        binomial_se(self.values[i], self.n)
    }
}

/// Estimates `K_C(t) = P(C(U) <= t)`, or with [`Transform::Order`]
/// `K_{C_T}(t) = P(H^C_T(T(U)) <= t)`, at every grid point.
///
/// The order variant needs a closed form for `H^C_T`: products, `M`, `W`
/// and their mixtures.
pub fn estimate_kendall_curve(
    model: &CopulaModel,
    cfg: &McConfig,
    transform: Transform,
    grid: &[f64],
) -> Result<KendallCurve> {
    if cfg.n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: cfg.n as i64,
            range: ">= 2".into(),
        });
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) || grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::Domain("grid must be strictly increasing inside [0, 1]".into()));
    }
    let prepared = match transform {
        Transform::None => PreparedModel::new(model)?,
        Transform::Order => PreparedModel::with_order_cdf(model)?,
    };
    let d = model.dimension();
    let g = grid.len();
    // histogram[j] counts samples whose statistic falls in (grid[j-1], grid[j]]
    let histogram = run_chunked(
        cfg,
        |rng, trials| {
            let mut u = vec![0.0; d];
            let mut hist = vec![0u64; g + 1];
            for _ in 0..trials {
                prepared.sample_into(rng, &mut u);
                let w = match transform {
                    Transform::None => prepared.cdf(&u),
                    Transform::Order => {
                        u.sort_by(f64::total_cmp);
                        prepared.order_cdf(&u).expect("prepared with order cdf")
                    }
                };
                let w = w.clamp(0.0, 1.0);
                hist[grid.partition_point(|&t| t < w)] += 1;
            }
            hist
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
        vec![0u64; g + 1],
    )?;
    let mut cumulative = 0u64;
    let values = histogram[..g]
        .iter()
        .map(|c| {
            cumulative += c;
            cumulative as f64 / cfg.n as f64
        })
        .collect();
    Ok(KendallCurve {
        grid: grid.to_vec(),
        values,
        n: cfg.n,
        seed: cfg.seed,
        transform,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_samples_rejected() {
        let m = CopulaModel::Product(2);
        assert!(estimate_bracket(&m, &McConfig::new(999, 1), Transform::None, None).is_err());
    }

    #[test]
    fn comonotone_bracket_is_one_half() {
        let e = estimate_bracket(
            &CopulaModel::FrechetM(3),
            &McConfig::new(20_000, 3),
            Transform::None,
            None,
        )
        .unwrap();
        assert!((e.value - 0.5).abs() < 4.0 * e.std_error);
        assert!(e.std_error > 0.0);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let m = CopulaModel::Product(3);
        let base = McConfig::new(10_000, 9);
        let a = estimate_bracket(&m, &base.with_threads(1), Transform::Order, None).unwrap();
        let b = estimate_bracket(&m, &base.with_threads(3), Transform::Order, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn curve_ends_at_one_and_is_monotone() {
        let grid: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).collect();
        let c = estimate_kendall_curve(
            &CopulaModel::mixture_d(),
            &McConfig::new(5000, 2),
            Transform::Order,
            &grid,
        )
        .unwrap();
        assert_eq!(*c.values.last().unwrap(), 1.0);
        assert!(c.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn shuffle_order_curve_unsupported() {
        let m = CopulaModel::ShuffleOfM(super::super::Shuffle::preset_b());
        let r = estimate_kendall_curve(&m, &McConfig::new(100, 1), Transform::Order, &[0.5]);
        assert!(matches!(r, Err(Error::Unsupported(_))));
        assert!(estimate_kendall_curve(&m, &McConfig::new(100, 1), Transform::None, &[0.5]).is_ok());
        assert!(estimate_kendall_curve(&m, &McConfig::new(100, 1), Transform::None, &[0.5, 0.5]).is_err());
    }
}
