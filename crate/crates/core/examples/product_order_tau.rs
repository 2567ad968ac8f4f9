//! The order transform of the independence copula: its distribution
//! function as a determinant, and Kendall's tau in closed form.

use kendall_order::exact::{format_rational, simplex_integral};
use kendall_order::product_order::{bracket_margin, hpit_polynomial, kappa_product_order, HpitEvaluator, SubsetK};

fn main() -> kendall_order::Result<()> {
    let h3 = hpit_polynomial(3)?;
    println!("H(u) for d = 3, valid on u1 <= u2 <= u3:\n  {h3}");
    let h = HpitEvaluator::new(3)?;
    println!("H(0.2, 0.5, 0.9) = {:.6}", h.eval(&[0.2, 0.5, 0.9]));
    println!(
        "H(0.9, 0.2, 0.5) = {:.6} (envelope of unsorted points)",
        h.eval(&[0.9, 0.2, 0.5])
    );
    println!("d! * integral of H over the simplex, d = 3: {}", {
        let integral = simplex_integral(&h3)?;
        integral * kendall_order::BigRational::from_integer(6.into())
    });

    println!("\n d  [Pi_T, Pi_T]  kappa[Pi_T]");
    for d in 2..=12 {
        let kappa = kappa_product_order(d)?;
        let bracket = if d <= 8 {
            format_rational(&bracket_margin(&SubsetK::full(d)?)?)
        } else {
            "-".to_string()
        };
        println!("{d:>2}  {bracket:>12}  {}", format_rational(&kappa));
    }
    Ok(())
}
