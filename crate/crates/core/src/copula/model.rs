use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::shuffle::Shuffle;
use crate::exact::{parse_rational, to_f64};
use crate::product_order::HpitEvaluator;
use crate::{Error, Result};

/// The copulas the lab can sample and evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum CopulaModel {
    /// `Π(u) = u_1 ... u_d`.
    Product(usize),
    /// Upper Fréchet–Hoeffding bound `M(u) = min u_i`.
    FrechetM(usize),
    /// Lower Fréchet–Hoeffding bound, bivariate only.
    FrechetW,
    /// Bivariate shuffle of `M`.
    ShuffleOfM(Shuffle),
    /// Convex combination; weights are positive and sum to one.
    Mixture(Vec<(BigRational, CopulaModel)>),
}

/// A point of the unit cube drawn from a copula measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint(pub Vec<f64>);

impl SamplePoint {
    pub fn coordinates(&self) -> &[f64] {
        &self.0
    }
}

/// Sorts the coordinates into nondecreasing order.
pub fn order_transform_point(x: &SamplePoint) -> SamplePoint {
    let mut v = x.0.clone();
    v.sort_by(f64::total_cmp);
    SamplePoint(v)
}

impl CopulaModel {
    /// `D = (M + W) / 2`.
    pub fn mixture_d() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        CopulaModel::Mixture(vec![
            (half.clone(), CopulaModel::FrechetM(2)),
            (half, CopulaModel::FrechetW),
        ])
    }

    pub fn dimension(&self) -> usize {
        match self {
            CopulaModel::Product(d) | CopulaModel::FrechetM(d) => *d,
            CopulaModel::FrechetW | CopulaModel::ShuffleOfM(_) => 2,
            CopulaModel::Mixture(parts) => parts.first().map_or(0, |(_, c)| c.dimension()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CopulaModel::Product(d) | CopulaModel::FrechetM(d) if *d < 2 => {
                Err(Error::Model(format!("dimension {d} < 2")))
            }
            CopulaModel::Product(_) | CopulaModel::FrechetM(_) | CopulaModel::FrechetW => Ok(()),
            CopulaModel::ShuffleOfM(s) => s.validate(),
            CopulaModel::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::Model("empty mixture".into()));
                }
                let d = parts[0].1.dimension();
                let mut total = BigRational::zero();
                for (w, c) in parts {
                    c.validate()?;
                    if c.dimension() != d {
                        return Err(Error::Model(format!(
                            "mixture components have dimensions {d} and {}",
                            c.dimension()
                        )));
                    }
                    if w <= &BigRational::zero() {
                        return Err(Error::Model(format!("mixture weight {w} is not positive")));
                    }
                    total += w;
                }
                if !total.is_one() {
                    return Err(Error::Model(format!("mixture weights sum to {total}, not 1")));
                }
                Ok(())
            }
        }
    }

    fn check_point<T>(&self, u: &[T]) -> Result<()> {
        if u.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                left: self.dimension(),
                right: u.len(),
            });
        }
        Ok(())
    }

    /// Exact value `C(u)` for `u` in the unit cube.
    pub fn eval_exact(&self, u: &[BigRational]) -> Result<BigRational> {
        self.check_point(u)?;
        let zero = BigRational::zero();
        Ok(match self {
            CopulaModel::Product(_) => u.iter().fold(BigRational::one(), |acc, x| acc * x),
            CopulaModel::FrechetM(_) => u.iter().min().cloned().unwrap_or_else(BigRational::one),
            CopulaModel::FrechetW => {
                let s = &u[0] + &u[1] - BigRational::one();
                if s > zero {
                    s
                } else {
                    zero
                }
            }
            CopulaModel::ShuffleOfM(s) => s.eval_exact(&u[0], &u[1]),
            CopulaModel::Mixture(parts) => {
                let mut acc = BigRational::zero();
                for (w, c) in parts {
                    acc += w * c.eval_exact(u)?;
                }
                acc
            }
        })
    }

    /// Maps a single uniform `t` to the support of a singular model:
    /// `M` → `(t, ..., t)`, `W` → `(t, 1 - t)`, shuffles → the point of the
    /// segment above `t`.
    pub fn point_at(&self, t: f64) -> Result<SamplePoint> {
        match self {
            CopulaModel::FrechetM(d) => Ok(SamplePoint(vec![t; *d])),
            CopulaModel::FrechetW => Ok(SamplePoint(vec![t, 1.0 - t])),
            CopulaModel::ShuffleOfM(s) => {
                let (x, y) = s.point_at(t);
                Ok(SamplePoint(vec![x, y]))
            }
            _ => Err(Error::Unsupported(format!("{self} is not supported on a curve"))),
        }
    }

    /// Draws one point from the copula measure.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SamplePoint> {
        let prepared = PreparedModel::new(self)?;
        let mut out = vec![0.0; self.dimension()];
        prepared.sample_into(rng, &mut out);
        Ok(SamplePoint(out))
    }
}

/// Floating-point form of a validated model for use inside sampling loops.
#[derive(Debug, Clone)]
pub(crate) enum PreparedModel {
    Product {
        d: usize,
        order_cdf: Option<HpitEvaluator>,
    },
    FrechetM {
        d: usize,
    },
    FrechetW,
    Shuffle(Vec<(f64, f64, f64)>),
    Mixture {
        cumulative: Vec<f64>,
        weights: Vec<f64>,
        parts: Vec<PreparedModel>,
    },
}

impl PreparedModel {
    pub(crate) fn new(model: &CopulaModel) -> Result<Self> {
        Self::build(model, false)
    }

    /// Also prepares the distribution function of the order statistic;
    /// fails for models without a closed form for it.
    pub(crate) fn with_order_cdf(model: &CopulaModel) -> Result<Self> {
        Self::build(model, true)
    }

    fn build(model: &CopulaModel, order: bool) -> Result<Self> {
        model.validate()?;
        Ok(match model {
            CopulaModel::Product(d) => PreparedModel::Product {
                d: *d,
                order_cdf: if order { Some(HpitEvaluator::new(*d)?) } else { None },
            },
            CopulaModel::FrechetM(d) => PreparedModel::FrechetM { d: *d },
            CopulaModel::FrechetW => PreparedModel::FrechetW,
            CopulaModel::ShuffleOfM(s) => {
                if order {
                    return Err(Error::Unsupported(
                        "no closed-form order-statistic distribution for shuffles".into(),
                    ));
                }
                PreparedModel::Shuffle(s.segments_f64())
            }
            CopulaModel::Mixture(parts) => {
                let weights: Vec<f64> = parts.iter().map(|(w, _)| to_f64(w)).collect();
                let mut acc = 0.0;
                let cumulative = weights
                    .iter()
                    .map(|w| {
                        acc += w;
                        acc
                    })
                    .collect();
                let parts = parts
                    .iter()
                    .map(|(_, c)| Self::build(c, order))
                    .collect::<Result<_>>()?;
                PreparedModel::Mixture {
                    cumulative,
                    weights,
                    parts,
                }
            }
        })
    }

    pub(crate) fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            PreparedModel::Product { .. } => out.iter_mut().for_each(|x| *x = rng.random()),
            PreparedModel::FrechetM { .. } => out.fill(rng.random()),
            PreparedModel::FrechetW => {
                let t: f64 = rng.random();
                out[0] = t;
                out[1] = 1.0 - t;
            }
            PreparedModel::Shuffle(segs) => {
                let (x, y) = shuffle_point(segs, rng.random());
                out[0] = x;
                out[1] = y;
            }
            PreparedModel::Mixture { cumulative, parts, .. } => {
                let r: f64 = rng.random();
                let i = cumulative.partition_point(|&c| c <= r).min(parts.len() - 1);
                parts[i].sample_into(rng, out);
            }
        }
    }

    /// `C(u)`.
    pub(crate) fn cdf(&self, u: &[f64]) -> f64 {
        match self {
            PreparedModel::Product { .. } => u.iter().product(),
            PreparedModel::FrechetM { .. } => u.iter().copied().fold(1.0, f64::min),
            PreparedModel::FrechetW => (u[0] + u[1] - 1.0).max(0.0),
            PreparedModel::Shuffle(segs) => segs
                .iter()
                .map(|&(a1, b1, offset)| (u[0] - a1).min(u[1] - a1 - offset).min(b1 - a1).max(0.0))
                .sum(),
            PreparedModel::Mixture { weights, parts, .. } => weights.iter().zip(parts).map(|(w, p)| w * p.cdf(u)).sum(),
        }
    }

    /// `H^C_T(x) = P(T(U) <= x)`; `None` when not prepared for it.
    pub(crate) fn order_cdf(&self, x: &[f64]) -> Option<f64> {
        match self {
            PreparedModel::Product { order_cdf, .. } => order_cdf.as_ref().map(|h| h.eval(x)),
            PreparedModel::FrechetM { .. } => Some(x.iter().copied().fold(1.0, f64::min).clamp(0.0, 1.0)),
            PreparedModel::FrechetW => {
                let f = |v: f64| v.clamp(0.0, 1.0);
                Some((f(2.0 * x[0]) + (2.0 * f(x[1]) - 1.0).max(0.0) - 1.0).max(0.0))
            }
            PreparedModel::Shuffle(_) => None,
            PreparedModel::Mixture { weights, parts, .. } => weights
                .iter()
                .zip(parts)
                .map(|(w, p)| p.order_cdf(x).map(|v| w * v))
                .sum(),
        }
    }

    #[allow(dead_code)]
    pub(crate) fn dimension(&self) -> usize {
        match self {
            PreparedModel::Product { d, .. } | PreparedModel::FrechetM { d } => *d,
            PreparedModel::FrechetW | PreparedModel::Shuffle(_) => 2,
            PreparedModel::Mixture { parts, .. } => parts[0].dimension(),
        }
    }
}

pub(crate) fn shuffle_point(segs: &[(f64, f64, f64)], t: f64) -> (f64, f64) {
    let i = segs.partition_point(|&(_, b1, _)| b1 <= t).min(segs.len() - 1);
    let (_, _, offset) = segs[i];
    (t, t + offset)
}

impl fmt::Display for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopulaModel::Product(d) => write!(f, "product:{d}"),
            CopulaModel::FrechetM(d) => write!(f, "M:{d}"),
            CopulaModel::FrechetW => f.write_str("W"),
            CopulaModel::ShuffleOfM(s) => write!(f, "shuffleM:{s}"),
            CopulaModel::Mixture(parts) => {
                f.write_str("mix:")?;
                for (i, (w, c)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{}/{}*{c}", w.numer(), w.denom())?;
                }
                Ok(())
            }
        }
    }
}

fn parse_dim(s: Option<&str>, default: Option<usize>, name: &str) -> Result<usize> {
    match s {
        Some(t) => t
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("`{t}` is not a dimension for {name}"))),
        None => default.ok_or_else(|| Error::Parse(format!("{name} needs a dimension, e.g. {name}:3"))),
    }
}

/// Model specifications: `product:5`, `M:3` (bare `M` is bivariate), `W`,
/// `shuffleM:A`, `shuffleM:B`, `shuffleM:0/4 2/4 1/4 3/4; ...`, `D`
/// (`(M+W)/2`) and mixtures such as `mix:0.5*M+0.5*W`.
impl FromStr for CopulaModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a)),
            None => (s, None),
        };
        let model = match head {
            "product" | "pi" | "Pi" | "P" => CopulaModel::Product(parse_dim(arg, Some(2), "product")?),
            "M" | "frechetM" => CopulaModel::FrechetM(parse_dim(arg, Some(2), "M")?),
            "W" | "frechetW" => {
                if parse_dim(arg, Some(2), "W")? != 2 {
                    return Err(Error::Model("W is a copula only in dimension 2".into()));
                }
                CopulaModel::FrechetW
            }
            "D" if arg.is_none() => CopulaModel::mixture_d(),
            "shuffleM" | "shuffle" => {
                let arg = arg.ok_or_else(|| Error::Parse("shuffleM needs segments or a preset".into()))?;
                CopulaModel::ShuffleOfM(arg.parse()?)
            }
            "mix" => {
                let arg = arg.ok_or_else(|| Error::Parse("mix needs components".into()))?;
                let parts = arg
                    .split('+')
                    .map(|part| {
                        let (w, c) = part
                            .split_once('*')
                            .ok_or_else(|| Error::Parse(format!("mixture term `{part}` is not w*C")))?;
                        Ok((parse_rational(w)?, c.parse::<CopulaModel>()?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                CopulaModel::Mixture(parts)
            }
            _ => return Err(Error::Parse(format!("unknown model `{s}`"))),
        };
        model.validate()?;
        Ok(model)
    }
}
