//! Kendall's tau of the lowest k order statistics of d independent
//! uniforms, scaled to denominator 945 where possible.

use kendall_order::cli::cmd_table;
use kendall_order::exact::format_rational;
use kendall_order::product_order::{kappa_lower_tail, kappa_lower_tail_limit};
use kendall_order::BigRational;

fn main() -> kendall_order::Result<()> {
    let n945 = BigRational::from_integer(945.into());
    print!("d\\k ");
    for k in 2..=5 {
        print!("{k:>8}");
    }
    println!();
    for d in 2..=5 {
        print!("{d:>3} ");
        for k in 2..=5 {
            if k <= d {
                print!("{:>8}", format!("{}/945", kappa_lower_tail(d, k)? * &n945));
            } else {
                print!("{:>8}", "");
            }
        }
        println!();
    }

    println!("\nlimits as d grows:");
    for k in 2..=6 {
        println!("  k = {k}: {}", format_rational(&kappa_lower_tail_limit(k)?));
    }

    println!("\nas CSV, d <= 4:");
    print!("{}", cmd_table(4)?.to_csv()?);
    Ok(())
}
