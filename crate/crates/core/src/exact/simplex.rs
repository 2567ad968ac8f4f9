use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{ExponentVector, SparsePoly};
use crate::{Error, Result};

fn check_integrable(p: &SparsePoly, i: usize) -> Result<()> {
    let dim = p.dimension();
    if i == 0 || i > dim {
        return Err(Error::VariableOutOfRange { index: i, dim });
    }
    if let Some(earlier) = (1..i).find(|&j| p.depends_on(j)) {
        return Err(Error::NotIntegrated {
            index: earlier,
            target: i,
        });
    }
    Ok(())
}

/// One step of the iterated integral: `∫_0^{u_{i+1}} p du_i`.
///
/// Variables `u_1..u_{i-1}` must already have been integrated out. The
/// result no longer depends on `u_i`.
pub fn integrate_var_to_next(p: &SparsePoly, i: usize) -> Result<SparsePoly> {
    check_integrable(p, i)?;
    if i == p.dimension() {
        return Err(Error::VariableOutOfRange {
            index: i + 1,
            dim: p.dimension(),
        });
    }
    let mut out = SparsePoly::zero(p.dimension());
    for (e, c) in p.terms() {
        let mut exps = e.entries().to_vec();
        let a = exps[i - 1];
        exps[i - 1] = 0;
        exps[i] += a + 1;
        out.add_term(
            ExponentVector::new(exps),
            c / BigRational::from_integer(BigInt::from(a + 1)),
        );
    }
    Ok(out)
}

/// Final step of the iterated integral: `∫_0^1 p du_d` for `d = dimension`.
pub fn integrate_last_to_one(p: &SparsePoly) -> Result<BigRational> {
    let d = p.dimension();
    check_integrable(p, d)?;
    let mut acc = BigRational::zero();
    for (e, c) in p.terms() {
        let a = e.get(d);
        acc += c / BigRational::from_integer(BigInt::from(a + 1));
    }
    Ok(acc)
}

/// `∫_{T(I^d)} p dλ^d`, computed as
/// `∫_0^1 ∫_0^{u_d} ... ∫_0^{u_2} p du_1 ... du_d`, innermost variable first.
pub fn simplex_integral(p: &SparsePoly) -> Result<BigRational> {
    let d = p.dimension();
    if d == 0 {
        return p
            .as_constant()
            .ok_or_else(|| Error::Internal("zero-dimensional polynomial with variables".into()));
    }
    let mut q = p.clone();
    for i in 1..d {
        q = integrate_var_to_next(&q, i)?;
    }
    integrate_last_to_one(&q)
}

/// Integrates out `u_1..u_n` of a polynomial in `n + 1` variables, stopping
/// before the last one. The result is a polynomial in `u_{n+1}` alone.
pub fn partial_simplex_integral(p: &SparsePoly) -> Result<SparsePoly> {
    let dim = p.dimension();
    if dim < 2 {
        return Err(Error::DimensionCap {
            d: dim,
            cap: 2,
            what: "partial integration (needs at least 2 variables)",
        });
    }
    let mut q = p.clone();
    for i in 1..dim {
        q = integrate_var_to_next(&q, i)?;
    }
    Ok(q)
}
