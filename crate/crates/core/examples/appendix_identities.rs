//! The combinatorial identities and simplex integrals behind the
//! lower-tail closed forms, checked exactly.

use kendall_order::appendix::{check_combinatorial_identities, check_integral_closed_forms, s_nm, snm_integral};
use kendall_order::exact::simplex_integral;

fn main() -> kendall_order::Result<()> {
    let s = s_nm(3, 2)?;
    println!("S_(3,2) = {s}");
    println!("integral over the simplex: {}", simplex_integral(&s)?);
    println!("closed form:               {}", snm_integral(3, 2)?);

    let ids = check_combinatorial_identities(12, 5, 1)?;
    let ints = check_integral_closed_forms(6)?;
    for report in [&ids, &ints] {
        println!(
            "\n{}: {} checks, {} failed",
            report.suite,
            report.len(),
            report.failures().count()
        );
        for c in report.checks.iter().take(4) {
            println!("  {}: {}", c.name, c.detail);
        }
    }
    assert!(ids.all_passed() && ints.all_passed());
    Ok(())
}
