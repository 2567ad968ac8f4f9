//! The order transform of `D = (M + W) / 2` in closed form.
//!
//! The order statistic of a pair with copula `D` has joint distribution
//! function `H^D_T = (H^M_T + H^W_T) / 2`; its margins are piecewise linear
//! with a single kink at `1/2` and strictly increasing, so `D_T` is obtained
//! by composing `H^D_T` with their exact inverses.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::rat;
use crate::{Error, Result};

fn unit(x: &BigRational) -> BigRational {
    x.clone().max(BigRational::zero()).min(BigRational::one())
}

fn pos(x: BigRational) -> BigRational {
    x.max(BigRational::zero())
}

/// `H^D_T(x) = F(min(x1, x2))/2 + (F(2 x1) + (2 F(x2) - 1)^+ - 1)^+ / 2`
/// with `F` the uniform distribution function.
pub fn h_d_order(x1: &BigRational, x2: &BigRational) -> BigRational {
    let two = rat(2, 1);
    let m = unit(x1.min(x2));
    let w = pos(unit(&(&two * x1)) + pos(&two * unit(x2) - BigRational::one()) - BigRational::one());
    (m + w) / two
}

/// The two univariate margins of `H^D_T`.
pub fn d_marginals(x: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    (h_d_order(x, &one), h_d_order(&one, x))
}

fn invert_piecewise<F>(g: F, u: &BigRational) -> BigRational
where
    F: Fn(&BigRational) -> BigRational,
{
    let knots = [rat(0, 1), rat(1, 2), rat(1, 1)];
    for w in knots.windows(2) {
        let (gl, gr) = (g(&w[0]), g(&w[1]));
        if &gl <= u && u <= &gr && gr > gl {
            return &w[0] + (u - &gl) * (&w[1] - &w[0]) / (gr - gl);
        }
    }
    unreachable!("margins of H^D_T are continuous bijections of [0,1]")
}

/// `D_T(u1, u2)`; boundary arguments use groundedness and uniform margins.
pub fn eval_d_order_transform(u1: &BigRational, u2: &BigRational) -> Result<BigRational> {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    for u in [u1, u2] {
        if u < &zero || u > &one {
            return Err(Error::Domain(format!("{u} is not in [0, 1]")));
        }
    }
    if u1.is_zero() || u2.is_zero() {
        return Ok(zero);
    }
    if u1.is_one() {
        return Ok(u2.clone());
    }
    if u2.is_one() {
        return Ok(u1.clone());
    }
    let x1 = invert_piecewise(|x| d_marginals(x).0, u1);
    let x2 = invert_piecewise(|x| d_marginals(x).1, u2);
    Ok(h_d_order(&x1, &x2))
}
