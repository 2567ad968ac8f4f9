use super::model::{CopulaModel, PreparedModel};
use super::monte_carlo::{estimate_bracket, estimate_kendall_curve, kappa_estimate, McConfig, Transform};
use crate::exact::to_f64;
use crate::product_order::{kappa_from_bracket, kappa_product_order, CLOSED_FORM_CAP};
use crate::report::Report;
use crate::Result;

/// Standard errors allowed for two-sided value checks against exact values.
pub const VALUE_SIGMA: f64 = 4.0;
/// Standard errors allowed for one-sided inequality checks.
pub const ONE_SIDED_SIGMA: f64 = 3.0;

/// `points` equally spaced interior points `i / (points + 1)`.
pub fn default_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|i| i as f64 / (points + 1) as f64).collect()
}

/// Statistical check that the order transform does not decrease Kendall's
/// tau, and, where `H^C_T` has a closed form, that the Kendall distribution
/// function of `C_T` lies below that of `C` on `grid`.
///
/// One-sided checks allow `sigma` combined standard errors. When an exact
/// value is known (products, shuffles, `M`) the estimates are also compared
/// with it at [`VALUE_SIGMA`].
pub fn verify_order_theorems(model: &CopulaModel, cfg: &McConfig, grid: &[f64], sigma: f64) -> Result<Report> {
    let d = model.dimension();
    let mut report = Report::new("order-theorems");

    let plain = estimate_bracket(model, cfg, Transform::None, None)?;
    let ordered = estimate_bracket(model, cfg, Transform::Order, None)?;
    let (tau, tau_se) = kappa_estimate(&plain, d);
    let (tau_t, tau_t_se) = kappa_estimate(&ordered, d);
    let slack = sigma * tau_se.hypot(tau_t_se);
    report.push(
        format!("{model}: kappa[C] <= kappa[C_T]"),
        tau <= tau_t + slack,
        format!("{tau:.6} vs {tau_t:.6} (allowance {slack:.6})"),
    );

    let exact_order_tau = match model {
        CopulaModel::Product(d) if *d <= CLOSED_FORM_CAP => Some(to_f64(&kappa_product_order(*d)?)),
        CopulaModel::FrechetM(_) => Some(1.0),
        CopulaModel::ShuffleOfM(s) if s.is_symmetric() => {
            Some(to_f64(&kappa_from_bracket(&s.bracket_order_transform_exact()?, 2)?))
        }
        _ => None,
    };
    if let Some(exact) = exact_order_tau {
        let ok = (tau_t - exact).abs() <= VALUE_SIGMA * tau_t_se;
        report.push(
            format!("{model}: kappa[C_T] matches exact value"),
            ok,
            format!("{tau_t:.6} vs {exact:.6} (se {tau_t_se:.6})"),
        );
    }

    if PreparedModel::with_order_cdf(model).is_ok() {
        let k = estimate_kendall_curve(model, cfg, Transform::None, grid)?;
        let k_t = estimate_kendall_curve(model, cfg, Transform::Order, grid)?;
        for (i, t) in grid.iter().enumerate() {
            let slack = sigma * k.std_error(i).hypot(k_t.std_error(i));
            report.push(
                format!("{model}: K_C_T({t:.4}) <= K_C({t:.4})"),
                k_t.values[i] <= k.values[i] + slack,
                format!("{:.6} vs {:.6} (allowance {slack:.6})", k_t.values[i], k.values[i]),
            );
        }
    }
    Ok(report)
}
