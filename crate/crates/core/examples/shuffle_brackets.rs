//! Exact brackets of shuffles of M and the mixture D = (M + W) / 2.

use kendall_order::copula::{eval_d_order_transform, h_d_order, Shuffle};
use kendall_order::exact::rat;

fn main() -> kendall_order::Result<()> {
    for (name, s) in [
        ("M", Shuffle::identity()),
        ("A", Shuffle::preset_a()),
        ("B", Shuffle::preset_b()),
    ] {
        println!(
            "{name}: segments {s}\n   [C, C] = {}, [C_T, C_T] = {}, symmetric {}",
            s.bracket_exact(),
            s.bracket_order_transform_exact()?,
            s.is_symmetric()
        );
    }
    let (a, b) = (Shuffle::preset_a(), Shuffle::preset_b());
    let x = (rat(1, 3), rat(5, 8));
    println!(
        "\nA(1/3, 5/8) = {}, B(1/3, 5/8) = {}",
        a.eval_exact(&x.0, &x.1),
        b.eval_exact(&x.0, &x.1)
    );

    println!("\nD = (M + W) / 2:");
    println!("  H_T(3/8, 1/2) = {}", h_d_order(&rat(3, 8), &rat(1, 2)));
    println!("  D_T(3/8, 1/2) = {}", eval_d_order_transform(&rat(3, 8), &rat(1, 2))?);
    Ok(())
}
