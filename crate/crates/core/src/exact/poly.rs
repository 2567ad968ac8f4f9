use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exponents of a monomial `u_1^{e_1} ... u_d^{e_d}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of `u_index` (1-based).
    pub fn get(&self, index: usize) -> u32 {
        self.0[index - 1]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn combine(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// What a variable is replaced by in [`SparsePoly::substitute`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Substitution {
    /// The variable `u_j` (1-based).
    Var(usize),
    Const(BigRational),
}

impl Substitution {
    pub fn one() -> Self {
        Substitution::Const(BigRational::one())
    }
}

/// Multivariate polynomial in `u_1..u_d` with exact rational coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    dim: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

impl SparsePoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(ExponentVector::zeros(dim), c);
        p
    }

    /// The monomial `u_index` (1-based).
    pub fn var(dim: usize, index: usize) -> Result<Self> {
        let mut e = vec![0; dim];
        *slot(&mut e, index, dim)? = 1;
        Ok(Self::monomial(BigRational::one(), ExponentVector(e)))
    }

    /// `coeff * u_index^power / power!`, the entry shape of the Hessenberg
    /// matrices used throughout the crate.
    pub fn scaled_power(dim: usize, index: usize, power: u32) -> Result<Self> {
        let mut e = vec![0; dim];
        *slot(&mut e, index, dim)? = power;
        let coeff = BigRational::new(BigInt::one(), super::factorial(power));
        Ok(Self::monomial(coeff, ExponentVector(e)))
    }

    pub fn monomial(coeff: BigRational, exponents: ExponentVector) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, coeff);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated exponent vectors.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: e.len(),
                });
            }
            p.add_term(ExponentVector(e), c);
        }
        Ok(p)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms
            .get(&ExponentVector(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    /// True when some term has a positive exponent on `u_index`.
    pub fn depends_on(&self, index: usize) -> bool {
        index >= 1 && index <= self.dim && self.terms.keys().any(|e| e.get(index) > 0)
    }

    /// If the polynomial is a constant, returns it.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                (e.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, exponents: ExponentVector, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.combine(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Embeds the polynomial into `new_dim >= dimension` variables; the new
    /// trailing variables do not occur.
    pub fn lift(&self, new_dim: usize) -> Result<Self> {
        if new_dim < self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: new_dim,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = e.0.clone();
                v.resize(new_dim, 0);
                (ExponentVector(v), c.clone())
            })
            .collect();
        Ok(Self { dim: new_dim, terms })
    }

    /// Replaces every variable `u_i` by `map[i - 1]`. The result lives in
    /// `target_dim` variables.
    pub fn substitute(&self, map: &[Substitution], target_dim: usize) -> Result<Self> {
        if map.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: map.len(),
            });
        }
        for s in map {
            if let Substitution::Var(j) = s {
                if *j == 0 || *j > target_dim {
                    return Err(Error::VariableOutOfRange {
                        index: *j,
                        dim: target_dim,
                    });
                }
            }
        }
        let mut out = Self::zero(target_dim);
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; target_dim];
            let mut coeff = c.clone();
            for (power, s) in e.0.iter().zip(map) {
                if *power == 0 {
                    continue;
                }
                match s {
                    Substitution::Var(j) => exps[j - 1] += power,
                    Substitution::Const(k) => coeff *= num_traits::pow(k.clone(), *power as usize),
                }
            }
            out.add_term(ExponentVector(exps), coeff);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, p) in point.iter().zip(&e.0) {
                if *p > 0 {
                    term *= num_traits::pow(x.clone(), *p as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluator with coefficients converted once.
    pub fn to_f64_evaluator(&self) -> PolyF64 {
        PolyF64 {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.0.iter().map(|&p| p as i32).collect(), super::to_f64(c)))
                .collect(),
        }
    }
}

fn slot(e: &mut [u32], index: usize, dim: usize) -> Result<&mut u32> {
    if index == 0 || index > dim {
        return Err(Error::VariableOutOfRange { index, dim });
    }
    Ok(&mut e[index - 1])
}

/// A [`SparsePoly`] with `f64` coefficients, for evaluation inside Monte
/// Carlo loops.
#[derive(Debug, Clone)]
pub struct PolyF64 {
    dim: usize,
    terms: Vec<(Vec<i32>, f64)>,
}

impl PolyF64 {
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&p, &xi)| if p == 0 { acc } else { acc * xi.powi(p) })
            })
            .sum()
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

// Operator impls panic on dimension mismatch; use the `try_` methods when
// dimensions are not known to agree.
impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_add(rhs).expect("polynomial dimensions differ")
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_sub(rhs).expect("polynomial dimensions differ")
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_mul(rhs).expect("polynomial dimensions differ")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (i, &p) in e.0.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*u{}", i + 1)?,
                    _ => write!(f, "*u{}^{}", i + 1, p)?,
                }
            }
        }
        Ok(())
    }
}
