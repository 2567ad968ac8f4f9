//! Brackets of K-margins of the order-transformed independence copula and
//! the reflection K -> d + 1 - K.

use kendall_order::product_order::{bracket_margin, kappa_from_bracket, reflect_subset, SubsetK};

fn main() -> kendall_order::Result<()> {
    let k = SubsetK::parse(5, "1,2,3,5")?;
    let bracket = bracket_margin(&k)?;
    println!(
        "d = 5, K = {k}: bracket {bracket}, tau {}",
        kappa_from_bracket(&bracket, k.len())?
    );
    let mirrored = reflect_subset(&k);
    println!("reflected K = {mirrored}: bracket {}", bracket_margin(&mirrored)?);

    println!("\nall margins for d = 4:");
    for k in SubsetK::all(4) {
        let b = bracket_margin(&k)?;
        let mirrored = reflect_subset(&k);
        println!(
            "  {:<10} bracket {:<8} tau {:<8} reflection {}",
            k.to_string(),
            b.to_string(),
            kappa_from_bracket(&b, k.len())?.to_string(),
            mirrored
        );
        assert_eq!(b, bracket_margin(&mirrored)?);
    }
    Ok(())
}
