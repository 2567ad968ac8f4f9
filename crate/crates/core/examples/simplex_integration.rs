//! Exact integration of polynomials over the ordered simplex
//! 0 <= u1 <= ... <= ud <= 1, one variable at a time.

use kendall_order::exact::{factorial, integrate_var_to_next, simplex_integral, SparsePoly};
use kendall_order::BigRational;

fn main() -> kendall_order::Result<()> {
    for d in 1..=6 {
        let vol = simplex_integral(&SparsePoly::one(d))?;
        println!("volume of the {d}-simplex: {vol} (1/{}!)", d);
        assert_eq!(vol, BigRational::new(1.into(), factorial(d as u32)));
    }

    // u1 * u3^2 in three variables
    let p = SparsePoly::from_terms(3, [(vec![1, 0, 2], BigRational::from_integer(1.into()))])?;
    let step = integrate_var_to_next(&p, 1)?;
    println!("after integrating u1: {step}");
    println!("full integral of {p}: {}", simplex_integral(&p)?);
    Ok(())
}
