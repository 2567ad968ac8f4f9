//! The polynomial families `S_n`, `S_{n,m}` and the closed-form integrals and
//! binomial identities they satisfy.
//!
//! `S_0 = 1` and
//! `S_n(u) = Σ_{i=1}^n (-1)^{i+n} u_i^{n-i+1} / (n-i+1)! · S_{i-1}(u_1..u_{i-1})`.
//! `S_{n,m}` is `S_n` with its last `m` arguments set to 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{
    binomial, binomial_general, factorial, partial_simplex_integral, simplex_integral, SparsePoly, Substitution,
};
use crate::report::Report;
use crate::{Error, Result};

/// `S_0, ..., S_n`, each embedded in `n` variables.
#[derive(Debug, Clone)]
pub struct SnFamily {
    n: usize,
    members: Vec<SparsePoly>,
}

impl SnFamily {
    pub fn new(n: usize) -> Result<Self> {
        let mut members: Vec<SparsePoly> = vec![SparsePoly::one(n)];
        for k in 1..=n {
            let mut s = SparsePoly::zero(n);
            for i in 1..=k {
                let term = SparsePoly::scaled_power(n, i, (k - i + 1) as u32)?.try_mul(&members[i - 1])?;
                s = if (i + k) % 2 == 0 {
                    s.try_add(&term)?
                } else {
                    s.try_sub(&term)?
                };
            }
            members.push(s);
        }
        Ok(Self { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `S_n` in `n` variables.
    pub fn polynomial(&self) -> &SparsePoly {
        &self.members[self.n]
    }

    /// `S_i` for `i <= n`, embedded in `n` variables.
    pub fn member(&self, i: usize) -> &SparsePoly {
        &self.members[i]
    }
}

pub fn s_n(n: usize) -> Result<SparsePoly> {
    Ok(SnFamily::new(n)?.polynomial().clone())
}

/// `S_{n,m}(u) = S_n(u_1, ..., u_{n-m}, 1, ..., 1)` as a polynomial in `n`
/// variables of which only the first `n - m` occur.
pub fn s_nm(n: usize, m: usize) -> Result<SparsePoly> {
    if m < 1 || m > n {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            range: format!("1..={n}"),
        });
    }
    let map: Vec<Substitution> = (1..=n)
        .map(|i| {
            if i <= n - m {
                Substitution::Var(i)
            } else {
                Substitution::one()
            }
        })
        .collect();
    s_n(n)?.substitute(&map, n)
}

fn q(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `Σ_{k=0}^n C(2n-2k, n-k) C(2k, k) / (2k-1)`, which vanishes.
pub fn identity1_lhs(n: usize) -> BigRational {
    let n = n as i64;
    (0..=n)
        .map(|k| {
            q(
                binomial(2 * n - 2 * k, n - k) * binomial(2 * k, k),
                BigInt::from(2 * k - 1),
            )
        })
        .sum()
}

/// Both sides of `Σ_{k=0}^n (-1)^k C(n,k) C(z,k) / C(y,k) = C(y-z,n) / C(y,n)`.
///
/// Returns `None` when some `C(y,k)`, `k <= n`, vanishes and the ratios are
/// undefined.
pub fn identity2_sides(n: usize, y: &BigRational, z: &BigRational) -> Option<(BigRational, BigRational)> {
    let denominators: Vec<BigRational> = (0..=n as u32).map(|k| binomial_general(y, k)).collect();
    if denominators.iter().any(Zero::is_zero) {
        return None;
    }
    let lhs = (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            sign * BigRational::from_integer(binomial(n as i64, k as i64)) * binomial_general(z, k as u32)
                / &denominators[k]
        })
        .sum();
    let rhs = binomial_general(&(y - z), n as u32) / &denominators[n];
    Some((lhs, rhs))
}

/// `Σ_{k=0}^n (-1)^k C(n,k) C(n+k,k+1)`, which vanishes.
pub fn identity3_lhs(n: usize) -> BigInt {
    let n = n as i64;
    (0..=n)
        .map(|k| {
            let t = binomial(n, k) * binomial(n + k, k + 1);
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// `Σ_{k=0}^n (-1)^k C(n+k,k) C(n+1,k+1)`, which vanishes.
pub fn identity4_lhs(n: usize) -> BigInt {
    let n = n as i64;
    (0..=n)
        .map(|k| {
            let t = binomial(n + k, k) * binomial(n + 1, k + 1);
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// `u_{n+1}^{2n} / (n! (n+1)!)` as a polynomial in `n + 1` variables.
pub fn sn_partial_integral(n: usize) -> Result<SparsePoly> {
    let mut e = vec![0; n + 1];
    e[n] = 2 * n as u32;
    SparsePoly::from_terms(
        n + 1,
        [(e, q(BigInt::one(), factorial(n as u32) * factorial(n as u32 + 1)))],
    )
}

/// Closed form of the `n`-fold iterated integral of `S_{n,m}` as a
/// polynomial in `u_{n+1}`:
/// `Σ_{l=0}^m u^{2n-l} / (2n)! · C(2n,l) / (n-l+1) · Σ_{h=0}^{m-l} (-1)^h C(2n-2l-h, n-l) C(n-l+1, h)`.
pub fn snm_partial_integral(n: usize, m: usize) -> Result<SparsePoly> {
    if n < 1 || m < 1 || m > n {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            range: format!("1..={n}"),
        });
    }
    let (ni, mi) = (n as i64, m as i64);
    let fact2n = factorial(2 * n as u32);
    let terms = (0..=mi).map(|l| {
        let inner: BigInt = (0..=mi - l)
            .map(|h| {
                let t = binomial(2 * ni - 2 * l - h, ni - l) * binomial(ni - l + 1, h);
                if h % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum();
        let coeff = q(binomial(2 * ni, l) * inner, fact2n.clone() * BigInt::from(ni - l + 1));
        let mut e = vec![0; n + 1];
        e[n] = (2 * ni - l) as u32;
        (e, coeff)
    });
    SparsePoly::from_terms(n + 1, terms)
}

/// `1/(n!(n+1)!) + 1/(2n)! Σ_{k=1}^m (2n-2k)! / ((n-k)! (n+1-k)!) C(2k-1,k)`,
/// the simplex integral of `S_{n,m}`. With `m = 0` the sum is empty.
pub fn snm_integral(n: usize, m: usize) -> Result<BigRational> {
    if n < 1 || m > n {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            range: format!("0..={n}"),
        });
    }
    let n32 = n as u32;
    let lead = q(BigInt::one(), factorial(n32) * factorial(n32 + 1));
    let sum: BigRational = (1..=m as u32)
        .map(|k| {
            q(
                factorial(2 * n32 - 2 * k) * binomial(2 * k as i64 - 1, k as i64),
                factorial(n32 - k) * factorial(n32 + 1 - k),
            )
        })
        .sum();
    Ok(lead + sum / BigRational::from_integer(factorial(2 * n32)))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.random_range(-60..=60);
    let den: i64 = rng.random_range(1..=12);
    q(num.into(), den.into())
}

/// Checks the four binomial identities for `1 <= n <= n_max`; the second
/// one with `trials` random rational pairs `(y, z)` per `n`.
///
/// Pairs whose `y` makes some `C(y, k)` vanish are resampled, never counted.
pub fn check_combinatorial_identities(n_max: usize, trials: usize, seed: u64) -> Result<Report> {
    if n_max < 1 {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: n_max as i64,
            range: ">= 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("identities");
    for n in 1..=n_max {
        let v = identity1_lhs(n);
        report.push(format!("identity1 n={n}"), v.is_zero(), format!("sum = {v}"));

        let mut bad = Vec::new();
        let mut accepted = 0;
        while accepted < trials {
            let (y, z) = (random_rational(&mut rng), random_rational(&mut rng));
            let Some((lhs, rhs)) = identity2_sides(n, &y, &z) else {
                continue;
            };
            accepted += 1;
            if lhs != rhs {
                bad.push(format!("y={y}, z={z}: {lhs} != {rhs}"));
            }
        }
        let detail = if bad.is_empty() {
            format!("{trials} rational (y, z) pairs")
        } else {
            bad.join("; ")
        };
        report.push(format!("identity2 n={n}"), bad.is_empty(), detail);

        let v = identity3_lhs(n);
        report.push(format!("identity3 n={n}"), v.is_zero(), format!("sum = {v}"));
        let v = identity4_lhs(n);
        report.push(format!("identity4 n={n}"), v.is_zero(), format!("sum = {v}"));
    }
    Ok(report)
}

/// Compares, for every `1 <= n <= n_max` and `0 <= m <= n`, the symbolic
/// simplex integral of `S_{n,m}` (`S_n` itself at `m = 0`) against the
/// closed forms, and the partial iterated integrals against the
/// polynomial closed forms in `u_{n+1}`.
pub fn check_integral_closed_forms(n_max: usize) -> Result<Report> {
    if n_max < 1 {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: n_max as i64,
            range: ">= 1".into(),
        });
    }
    let mut report = Report::new("integrals");
    let one = BigRational::one();
    for n in 1..=n_max {
        let s = s_n(n)?;
        let symbolic = simplex_integral(&s)?;
        let lead = q(BigInt::one(), factorial(n as u32) * factorial(n as u32 + 1));
        let sum_form = snm_integral(n, 0)?;
        report.push(
            format!("S_n integral n={n}"),
            symbolic == lead && lead == sum_form,
            format!("symbolic {symbolic}, closed form {lead}"),
        );
        let partial = partial_simplex_integral(&s.lift(n + 1)?)?;
        let closed = sn_partial_integral(n)?;
        report.push(
            format!("S_n partial integral n={n}"),
            partial == closed,
            format!("{partial}"),
        );

        for m in 1..=n {
            let snm = s_nm(n, m)?;
            let symbolic = simplex_integral(&snm)?;
            let poly_form = snm_partial_integral(n, m)?;
            let poly_at_one = poly_form.eval(&vec![one.clone(); n + 1])?;
            let sum_form = snm_integral(n, m)?;
            report.push(
                format!("S_n,m integral n={n} m={m}"),
                symbolic == poly_at_one && symbolic == sum_form,
                format!("symbolic {symbolic}, polynomial {poly_at_one}, sum {sum_form}"),
            );
            let partial = partial_simplex_integral(&snm.lift(n + 1)?)?;
            report.push(
                format!("S_n,m partial integral n={n} m={m}"),
                partial == poly_form,
                format!("{partial}"),
            );
        }
    }
    Ok(report)
}
