//! Monte Carlo brackets next to their exact values. Results depend only
//! on the seed, not on the number of threads.

use kendall_order::copula::{estimate_bracket, kappa_estimate, CopulaModel, McConfig, Transform};
use kendall_order::exact::to_f64;
use kendall_order::product_order::{bracket_margin, SubsetK};

fn main() -> kendall_order::Result<()> {
    let cfg = McConfig::new(200_000, 7);
    for spec in ["product:3", "M:3", "shuffleM:B", "mix:1/2*M+1/2*W"] {
        let model: CopulaModel = spec.parse()?;
        for t in [Transform::None, Transform::Order] {
            let e = estimate_bracket(&model, &cfg, t, None)?;
            let (tau, se) = kappa_estimate(&e, model.dimension());
            println!(
                "{spec:<18} {:<5} bracket {:.5} +- {:.5}  tau {:.4} +- {:.4}",
                t.as_str(),
                e.value,
                e.std_error,
                tau,
                se
            );
        }
    }

    let k = SubsetK::parse(5, "1,2,3,5")?;
    let e = estimate_bracket(&CopulaModel::Product(5), &cfg, Transform::Order, Some(&k))?;
    println!(
        "\nmargin {k} of Pi_T, d = 5: {:.5} +- {:.5}, exact {:.5}",
        e.value,
        e.std_error,
        to_f64(&bracket_margin(&k)?)
    );

    let one = estimate_bracket(&CopulaModel::Product(4), &cfg.with_threads(1), Transform::Order, None)?;
    let many = estimate_bracket(&CopulaModel::Product(4), &cfg.with_threads(8), Transform::Order, None)?;
    println!("1 thread vs 8 threads identical: {}", one == many);
    Ok(())
}
