//! Bivariate shuffles of `M`: the copula measure is uniform on finitely many
//! slope-one segments whose projections tile both axes.
//!
//! Everything here is exact. Along a segment, with `t` the first
//! coordinate, both `C(t, t + c)` and `C(m(t), m(t))` for `m(t) = min(t, t + c)`
//! are piecewise linear in `t`, and every kink sits at a segment endpoint
//! coordinate shifted by `0` or by `-c`. Integrating piece by piece with the
//! midpoint rule is therefore exact.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{parse_rational_exact, rat, to_f64};
use crate::{Error, Result};

/// A segment from `a` to `b` with `b - a = (len, len)`, `len > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub a: [BigRational; 2],
    pub b: [BigRational; 2],
}

impl Segment {
    pub fn new(a: [BigRational; 2], b: [BigRational; 2]) -> Self {
        Self { a, b }
    }

    pub fn len(&self) -> BigRational {
        &self.b[0] - &self.a[0]
    }

    /// Vertical offset `a_2 - a_1` of the line carrying the segment.
    pub fn offset(&self) -> BigRational {
        &self.a[1] - &self.a[0]
    }

    /// Mass of the segment inside `[0, u1] x [0, u2]`.
    fn mass_below(&self, u1: &BigRational, u2: &BigRational) -> BigRational {
        let m = (u1 - &self.a[0]).min(u2 - &self.a[1]).min(self.len());
        m.max(BigRational::zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shuffle {
    segments: Vec<Segment>,
}

fn seg(a1: (i64, i64), a2: (i64, i64), b1: (i64, i64), b2: (i64, i64)) -> Segment {
    Segment::new([rat(a1.0, a1.1), rat(a2.0, a2.1)], [rat(b1.0, b1.1), rat(b2.0, b2.1)])
}

impl Shuffle {
    /// Validates and sorts segments by their first coordinate.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self> {
        segments.sort_by(|x, y| x.a[0].cmp(&y.a[0]));
        let s = Self { segments };
        s.validate()?;
        Ok(s)
    }

    /// Shuffle `A`: mass on `v = u + 1/2` for `u < 1/2` and `v = u - 1/2`
    /// above, split into four quarter-length segments.
    pub fn preset_a() -> Self {
        Self::new(vec![
            seg((0, 4), (2, 4), (1, 4), (3, 4)),
            seg((1, 4), (3, 4), (2, 4), (4, 4)),
            seg((2, 4), (0, 4), (3, 4), (1, 4)),
            seg((3, 4), (1, 4), (4, 4), (2, 4)),
        ])
        .expect("preset A is a valid shuffle")
    }

    /// Shuffle `B`.
    pub fn preset_b() -> Self {
        Self::new(vec![
            seg((0, 4), (0, 4), (1, 4), (1, 4)),
            seg((1, 4), (3, 4), (2, 4), (4, 4)),
            seg((2, 4), (2, 4), (3, 4), (3, 4)),
            seg((3, 4), (1, 4), (4, 4), (2, 4)),
        ])
        .expect("preset B is a valid shuffle")
    }

    /// `M` itself as a one-segment shuffle.
    pub fn identity() -> Self {
        Self::new(vec![seg((0, 1), (0, 1), (1, 1), (1, 1))]).expect("diagonal is a valid shuffle")
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::Model("shuffle without segments".into()));
        }
        let zero = BigRational::zero();
        let one = BigRational::one();
        for s in &self.segments {
            let d1 = &s.b[0] - &s.a[0];
            let d2 = &s.b[1] - &s.a[1];
            if d1 != d2 || d1 <= zero {
                return Err(Error::Model(format!(
                    "segment {s} does not have slope one and positive length"
                )));
            }
            if s.a.iter().chain(&s.b).any(|x| x < &zero || x > &one) {
                return Err(Error::Model(format!("segment {s} leaves the unit square")));
            }
        }
        for axis in 0..2 {
            let mut spans: Vec<(&BigRational, &BigRational)> =
                self.segments.iter().map(|s| (&s.a[axis], &s.b[axis])).collect();
            spans.sort();
            let mut cursor = &zero;
            for (lo, hi) in spans {
                if lo != cursor {
                    return Err(Error::Model(format!(
                        "projections onto axis {} do not tile [0,1] (gap or overlap at {cursor})",
                        axis + 1
                    )));
                }
                cursor = hi;
            }
            if cursor != &one {
                return Err(Error::Model(format!(
                    "projections onto axis {} end at {cursor}",
                    axis + 1
                )));
            }
        }
        Ok(())
    }

    /// Total segment length, which is 1 for a valid shuffle.
    pub fn total_mass(&self) -> BigRational {
        self.segments.iter().map(Segment::len).sum()
    }

    pub fn eval_exact(&self, u1: &BigRational, u2: &BigRational) -> BigRational {
        self.segments.iter().map(|s| s.mass_below(u1, u2)).sum()
    }

    /// `(a_1, b_1, a_2 - a_1)` per segment, sorted by `a_1`.
    pub(crate) fn segments_f64(&self) -> Vec<(f64, f64, f64)> {
        self.segments
            .iter()
            .map(|s| (to_f64(&s.a[0]), to_f64(&s.b[0]), to_f64(&s.offset())))
            .collect()
    }

    pub(crate) fn point_at(&self, t: f64) -> (f64, f64) {
        super::model::shuffle_point(&self.segments_f64(), t)
    }

    fn coordinates(&self) -> Vec<BigRational> {
        let mut xs: Vec<BigRational> = self
            .segments
            .iter()
            .flat_map(|s| s.a.iter().chain(&s.b).cloned())
            .collect();
        xs.push(BigRational::zero());
        xs.push(BigRational::one());
        xs.sort();
        xs.dedup();
        xs
    }

    /// Checks `C(u, v) = C(v, u)` on the grid made of all endpoint
    /// coordinates and the midpoints between consecutive ones.
    pub fn is_symmetric(&self) -> bool {
        let xs = self.coordinates();
        let two = rat(2, 1);
        let mut grid = xs.clone();
        grid.extend(xs.windows(2).map(|w| (&w[0] + &w[1]) / &two));
        grid.iter()
            .all(|u| grid.iter().all(|v| self.eval_exact(u, v) == self.eval_exact(v, u)))
    }

    /// Integrates `f(t, c)` along every segment, `t` running over the
    /// segment's first-coordinate span and `c` its offset, assuming `f` is
    /// linear between consecutive candidate kinks.
    fn integrate_along<F>(&self, f: F) -> BigRational
    where
        F: Fn(&BigRational, &BigRational) -> BigRational,
    {
        let xs = self.coordinates();
        let two = rat(2, 1);
        let mut total = BigRational::zero();
        for s in &self.segments {
            let c = s.offset();
            let (lo, hi) = (&s.a[0], &s.b[0]);
            let mut cuts: Vec<BigRational> = xs
                .iter()
                .flat_map(|x| [x.clone(), x - &c])
                .filter(|t| t > lo && t < hi)
                .collect();
            cuts.push(lo.clone());
            cuts.push(hi.clone());
            cuts.sort();
            cuts.dedup();
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / &two;
                total += (&w[1] - &w[0]) * f(&mid, &c);
            }
        }
        total
    }

    /// `[C, C] = ∫ C dQ^C`.
    pub fn bracket_exact(&self) -> BigRational {
        self.integrate_along(|t, c| self.eval_exact(t, &(t + c)))
    }

    /// `∫ C(min(u1, u2), min(u1, u2)) dQ^C`.
    pub fn diagonal_integral(&self) -> BigRational {
        self.integrate_along(|t, c| {
            let m = if c < &BigRational::zero() { t + c } else { t.clone() };
            self.eval_exact(&m, &m)
        })
    }

    /// `[C_T, C_T] = 2 [C, C] - ∫ C(min, min) dQ^C`; the identity holds for
    /// exchangeable copulas only, so asymmetric shuffles are rejected.
    pub fn bracket_order_transform_exact(&self) -> Result<BigRational> {
        if !self.is_symmetric() {
            return Err(Error::Unsupported(format!(
                "shuffle {self} is not symmetric; the order-transform bracket identity needs exchangeability"
            )));
        }
        Ok(self.bracket_exact() * rat(2, 1) - self.diagonal_integral())
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = |x: &BigRational| format!("{}/{}", x.numer(), x.denom());
        write!(
            f,
            "{} {} {} {}",
            q(&self.a[0]),
            q(&self.a[1]),
            q(&self.b[0]),
            q(&self.b[1])
        )
    }
}

impl fmt::Display for Shuffle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.segments.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

/// `A`, `B`, `M`, or segments `a1 a2 b1 b2` separated by `;` or `,`, each
/// coordinate an exact rational such as `3/4`.
impl FromStr for Shuffle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" => return Ok(Self::preset_a()),
            "B" => return Ok(Self::preset_b()),
            "M" => return Ok(Self::identity()),
            _ => {}
        }
        let segments = s
            .split([';', ','])
            .filter(|part| !part.trim().is_empty())
            .map(|part| {
                let coords = part
                    .split_whitespace()
                    .map(parse_rational_exact)
                    .collect::<Result<Vec<_>>>()?;
                match <[BigRational; 4]>::try_from(coords) {
                    Ok([a1, a2, b1, b2]) => Ok(Segment::new([a1, a2], [b1, b2])),
                    Err(_) => Err(Error::Parse(format!(
                        "segment `{part}` needs four coordinates a1 a2 b1 b2"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(segments)
    }
}
