//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use kendall_order::appendix::{check_combinatorial_identities, check_integral_closed_forms};
use kendall_order::copula::{
    default_grid, estimate_bracket, estimate_kendall_curve, eval_d_order_transform, verify_order_theorems, CopulaModel,
    McConfig, Shuffle, Transform,
};
use kendall_order::exact::{factorial, rat, simplex_integral, to_f64};
use kendall_order::product_order::{
    bracket_lower_tail_large_k, bracket_lower_tail_small_k, bracket_margin, hpit_polynomial, kappa_from_bracket,
    kappa_lower_tail, kappa_lower_tail_limit, kappa_product_order, reflect_subset, SubsetK,
};
use kendall_order::report::Report;
use kendall_order::BigRational;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Option<Duration>, Box<dyn Fn() -> Outcome>);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn report_ok(r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{} failed ({}): {}", r.suite, c.name, c.detail)),
    }
}

fn c1_product_order() -> Outcome {
    for d in 2..=8usize {
        let h = hpit_polynomial(d).map_err(err)?;
        let b = simplex_integral(&h).map_err(err)? * BigRational::from_integer(factorial(d as u32));
        ensure(b == rat(1, d as i64 + 1), format!("d={d}: d! * integral = {b}"))?;
        let (p, p1) = (1i64 << d, 1i64 << (d - 1));
        let closed = rat(p - (d as i64 + 1), (p1 - 1) * (d as i64 + 1));
        let kappa = kappa_product_order(d).map_err(err)?;
        ensure(kappa == closed, format!("d={d}: kappa {kappa} vs {closed}"))?;
        ensure(
            kappa_from_bracket(&b, d).map_err(err)? == closed,
            format!("d={d}: bracket route"),
        )?;
    }
    Ok("d=2..8 brackets 1/(d+1), kappa closed form".into())
}

const TABLE_945: [(usize, usize, i64); 10] = [
    (2, 2, 315),
    (3, 2, 378),
    (4, 2, 405),
    (5, 2, 420),
    (3, 3, 315),
    (4, 3, 369),
    (5, 3, 395),
    (4, 4, 297),
    (5, 4, 345),
    (5, 5, 273),
];

fn c2_table() -> Outcome {
    for (d, k, n) in TABLE_945 {
        let want = rat(n, 945);
        let small = kappa_from_bracket(&bracket_lower_tail_small_k(d, k).map_err(err)?, k).map_err(err)?;
        let large = kappa_from_bracket(&bracket_lower_tail_large_k(d, k).map_err(err)?, k).map_err(err)?;
        let integrated =
            kappa_from_bracket(&bracket_margin(&SubsetK::lower(d, k).map_err(err)?).map_err(err)?, k).map_err(err)?;
        ensure(
            small == want && large == want && integrated == want && kappa_lower_tail(d, k).map_err(err)? == want,
            format!("d={d} k={k}: {small} / {large} / {integrated} vs {want}"),
        )?;
    }
    Ok("10 entries x 3 routes".into())
}

fn c3_worked_example() -> Outcome {
    let k = SubsetK::parse(5, "1,2,3,5").map_err(err)?;
    let mirrored = reflect_subset(&k);
    ensure(
        mirrored == SubsetK::parse(5, "1,3,4,5").map_err(err)?,
        format!("b(K) = {mirrored}"),
    )?;
    for s in [&k, &mirrored] {
        let b = bracket_margin(s).map_err(err)?;
        let tau = kappa_from_bracket(&b, 4).map_err(err)?;
        ensure(b == rat(47, 252) && tau == rat(125, 441), format!("{s}: {b}, {tau}"))?;
    }
    Ok("47/252 and 125/441 for {1,2,3,5} and {1,3,4,5}".into())
}

fn c4_reflection() -> Outcome {
    let mut total = 0;
    for d in 3..=6 {
        let subsets = SubsetK::all(d);
        if d == 6 {
            ensure(subsets.len() == 57, format!("{} subsets at d=6", subsets.len()))?;
        }
        for k in subsets {
            let (a, b) = (
                bracket_margin(&k).map_err(err)?,
                bracket_margin(&reflect_subset(&k)).map_err(err)?,
            );
            ensure(a == b, format!("d={d} K={k}: {a} vs {b}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} subsets, d=3..6"))
}

fn c5_first_pair() -> Outcome {
    for d in 2..=8 {
        let t = kappa_lower_tail(d, 2).map_err(err)?;
        ensure(t == rat(d as i64 - 1, 2 * d as i64 - 1), format!("d={d}: {t}"))?;
    }
    let lim = kappa_lower_tail_limit(2).map_err(err)?;
    ensure(lim == rat(1, 2), format!("limit {lim}"))?;
    Ok("(d-1)/(2d-1) for d=2..8, limit 1/2".into())
}

fn c6_appendix() -> Outcome {
    let ids = check_combinatorial_identities(30, 20, 2718).map_err(err)?;
    report_ok(&ids)?;
    let ints = check_integral_closed_forms(8).map_err(err)?;
    report_ok(&ints)?;
    Ok(format!("{} identity checks, {} integral checks", ids.len(), ints.len()))
}

fn c7_shuffles() -> Outcome {
    let (a, b) = (Shuffle::preset_a(), Shuffle::preset_b());
    let at = a.bracket_order_transform_exact().map_err(err)?;
    let bt = b.bracket_order_transform_exact().map_err(err)?;
    ensure(
        at == rat(1, 2) && bt == rat(3, 8),
        format!("[A_T,A_T]={at}, [B_T,B_T]={bt}"),
    )?;
    for i in 0..=32 {
        for j in 0..=32 {
            let (u, v) = (rat(i, 32), rat(j, 32));
            ensure(
                a.eval_exact(&u, &v) <= b.eval_exact(&u, &v),
                format!("A > B at ({u}, {v})"),
            )?;
        }
    }
    let d = CopulaModel::mixture_d()
        .eval_exact(&[rat(3, 8), rat(4, 8)])
        .map_err(err)?;
    let dt = eval_d_order_transform(&rat(3, 8), &rat(4, 8)).map_err(err)?;
    ensure(d == rat(3, 16) && dt == rat(2, 16), format!("D = {d}, D_T = {dt}"))?;
    Ok("1/2, 3/8, A <= B on 33x33, D = 3/16 > 1/8 = D_T".into())
}

const MC_SEEDS: [u64; 3] = [7, 17, 27];
const MC_N: u64 = 100_000;

fn c8_monte_carlo(threads: Option<usize>) -> Result<Vec<f64>, String> {
    let mut values = Vec::new();
    let mut worst: f64 = 0.0;
    for seed in MC_SEEDS {
        let mut cfg = McConfig::new(MC_N, seed);
        cfg.threads = threads;
        let mut targets = vec![];
        for d in [3usize, 5] {
            targets.push((CopulaModel::Product(d), None, 1.0 / (d as f64 + 1.0)));
        }
        let k = SubsetK::parse(5, "1,2,3,5").map_err(err)?;
        targets.push((CopulaModel::Product(5), Some(k), to_f64(&rat(47, 252))));
        for (model, k, target) in targets {
            let e = estimate_bracket(&model, &cfg, Transform::Order, k.as_ref()).map_err(err)?;
            let z = (e.value - target).abs() / e.std_error;
            worst = worst.max(z);
            ensure(
                z <= 4.0,
                format!("{model} K={k:?} seed={seed}: {} vs {target} ({z:.2} se)", e.value),
            )?;
            values.extend([e.value, e.std_error]);
        }
    }
    values.push(worst);
    Ok(values)
}

fn c9_order_theorems(threads: Option<usize>) -> Result<(Vec<Report>, Vec<f64>), String> {
    let mut cfg = McConfig::new(MC_N, 11);
    cfg.threads = threads;
    let grid = default_grid(19);
    let mut reports = Vec::new();
    for model in [
        CopulaModel::Product(4),
        CopulaModel::ShuffleOfM(Shuffle::preset_b()),
        CopulaModel::mixture_d(),
    ] {
        reports.push(verify_order_theorems(&model, &cfg, &grid, 3.0).map_err(err)?);
    }
    let p2 = CopulaModel::Product(2);
    let k = estimate_kendall_curve(&p2, &cfg, Transform::None, &grid).map_err(err)?;
    let kt = estimate_kendall_curve(&p2, &cfg, Transform::Order, &grid).map_err(err)?;
    let mut curves = Report::new("product:2 curves");
    for (i, t) in grid.iter().enumerate() {
        let slack = 3.0 * k.std_error(i).hypot(kt.std_error(i));
        curves.push(format!("t={t:.2}"), kt.values[i] <= k.values[i] + slack, "");
    }
    reports.push(curves);
    let values = k.values.iter().chain(&kt.values).copied().collect();
    Ok((reports, values))
}

fn c9() -> Outcome {
    let (reports, _) = c9_order_theorems(None)?;
    let checks: usize = reports.iter().map(Report::len).sum();
    for r in &reports {
        report_ok(r)?;
    }
    Ok(format!(
        "{checks} checks: tau inequalities, exact values, 19-point curves"
    ))
}

fn c10_determinism() -> Outcome {
    let runs = [1, 2, 8]
        .iter()
        .map(|&t| Ok((c8_monte_carlo(Some(t))?, c9_order_theorems(Some(t))?)))
        .collect::<Result<Vec<_>, String>>()?;
    for w in runs.windows(2) {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        ensure(
            bits(&w[0].0) == bits(&w[1].0),
            "bracket estimates differ across thread counts",
        )?;
        ensure(
            bits(&w[0].1 .1) == bits(&w[1].1 .1),
            "Kendall curves differ across thread counts",
        )?;
        ensure(
            w[0].1 .0 == w[1].1 .0,
            "order-theorem reports differ across thread counts",
        )?;
    }
    Ok("criteria 8 and 9 bit-identical on 1, 2 and 8 threads".into())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "product order tau",
            Some(Duration::from_secs(30)),
            Box::new(c1_product_order),
        ),
        (2, "lower-tail table", Some(Duration::from_secs(10)), Box::new(c2_table)),
        (
            3,
            "worked margin",
            Some(Duration::from_secs(10)),
            Box::new(c3_worked_example),
        ),
        (
            4,
            "reflection sweep",
            Some(Duration::from_secs(300)),
            Box::new(c4_reflection),
        ),
        (5, "first pair", None, Box::new(c5_first_pair)),
        (
            6,
            "appendix identities",
            Some(Duration::from_secs(120)),
            Box::new(c6_appendix),
        ),
        (7, "shuffle exactness", None, Box::new(c7_shuffles)),
        (
            8,
            "monte carlo consistency",
            Some(Duration::from_secs(60)),
            Box::new(|| c8_monte_carlo(None).map(|v| format!("worst deviation {:.2} se", v[v.len() - 1]))),
        ),
        (9, "order theorems", None, Box::new(c9)),
        (10, "thread determinism", None, Box::new(c10_determinism)),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.1?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
