//! Empirical Kendall distribution functions of a copula and of its order
//! transform. The second never lies above the first.

use kendall_order::copula::{default_grid, estimate_kendall_curve, CopulaModel, McConfig, Transform};

fn main() -> kendall_order::Result<()> {
    let grid = default_grid(9);
    let cfg = McConfig::new(100_000, 3);
    let model = CopulaModel::Product(2);
    let k = estimate_kendall_curve(&model, &cfg, Transform::None, &grid)?;
    let k_t = estimate_kendall_curve(&model, &cfg, Transform::Order, &grid)?;
    println!("   t     K_C   t-t*ln(t)  K_C_T");
    for (i, t) in grid.iter().enumerate() {
        println!(
            "{t:.3}  {:.4}  {:.4}     {:.4}",
            k.values[i],
            t - t * t.ln(),
            k_t.values[i]
        );
    }

    let w = estimate_kendall_curve(&CopulaModel::FrechetW, &cfg, Transform::Order, &grid)?;
    println!("\nW: K_C_T at t = 0.5 is {:.4}", w.values[4]);
    Ok(())
}
