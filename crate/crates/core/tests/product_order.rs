use kendall_order::cli::{cmd_table, OutputRecord};
use kendall_order::exact::{format_rational, rat};
use kendall_order::product_order::{
    bracket_lower_tail_large_k, bracket_lower_tail_small_k, bracket_margin, check_bracket_equivalence,
    check_monotonicity, check_reflection, kappa_from_bracket, kappa_lower_tail, kappa_lower_tail_limit,
    kappa_product_order, reflect_subset, SubsetK,
};
use kendall_order::BigRational;
use num_traits::One;

/// Rows (d, k, 945 * tau) for 2 <= k <= d <= 5.
const TABLE_945: [(usize, usize, i64); 10] = [
    (2, 2, 315),
    (3, 2, 378),
    (3, 3, 315),
    (4, 2, 405),
    (4, 3, 369),
    (4, 4, 297),
    (5, 2, 420),
    (5, 3, 395),
    (5, 4, 345),
    (5, 5, 273),
];

#[test]
fn brackets_agree_with_closed_forms_up_to_seven() {
    let r = check_bracket_equivalence(7).unwrap();
    assert!(r.all_passed(), "{r}");
    assert_eq!(r.len(), (2..=7).sum::<usize>());
}

#[test]
fn both_tail_forms_agree_up_to_twelve() {
    for d in 2..=12 {
        for k in 2..=d {
            assert_eq!(
                bracket_lower_tail_small_k(d, k).unwrap(),
                bracket_lower_tail_large_k(d, k).unwrap()
            );
        }
    }
}

#[test]
fn reflection_up_to_six() {
    let r = check_reflection(6).unwrap();
    assert!(r.all_passed(), "{r}");
    for k in SubsetK::all(6) {
        assert_eq!(reflect_subset(&reflect_subset(&k)), k);
    }
}

#[test]
fn monotonicity_and_bounds() {
    let r = check_monotonicity(10).unwrap();
    assert!(r.all_passed(), "{r}");
    for d in 2..=7 {
        for k in 3..=d {
            assert!(kappa_lower_tail(d, k - 1).unwrap() > kappa_lower_tail(d, k).unwrap());
        }
    }
}

#[test]
fn every_margin_tau_within_bounds() {
    for d in 2..=6 {
        for k in SubsetK::all(d) {
            let m = k.len() as i64;
            let tau = kappa_from_bracket(&bracket_margin(&k).unwrap(), k.len()).unwrap();
            assert!(
                tau >= -rat(1, (1 << (m - 1)) - 1) && tau <= BigRational::one(),
                "{k}: {tau}"
            );
        }
    }
}

#[test]
fn first_pair_and_its_limit() {
    for d in 2..=12 {
        assert_eq!(kappa_lower_tail(d, 2).unwrap(), rat(d as i64 - 1, 2 * d as i64 - 1));
    }
    assert_eq!(kappa_lower_tail_limit(2).unwrap(), rat(1, 2));
    assert!(kappa_product_order(10).unwrap() < kappa_product_order(2).unwrap());
}

#[test]
fn table_matches_reference_and_is_stable() {
    let rec = cmd_table(5).unwrap();
    let rows = rec.rows().unwrap();
    assert_eq!(rows.len(), TABLE_945.len());
    let mut expected = String::from("d,k,kappa,kappa_945\n");
    for ((d, k, n), row) in TABLE_945.iter().zip(rows) {
        let row = row.as_map().unwrap();
        assert_eq!(row["d"].as_u64(), Some(*d as u64));
        assert_eq!(row["k"].as_u64(), Some(*k as u64));
        assert_eq!(row["kappa"].as_rational(), Some(&rat(*n, 945)));
        assert_eq!(row["kappa_945"].as_u64(), Some(*n as u64));
        expected.push_str(&format!("{d},{k},{},{n}\n", format_rational(&rat(*n, 945))));
    }
    assert_eq!(rec.to_csv().unwrap(), expected);
    assert_eq!(cmd_table(5).unwrap().to_json().unwrap(), rec.to_json().unwrap());
    assert_eq!(OutputRecord::from_json(&rec.to_json().unwrap()).unwrap(), rec);
}

#[test]
fn larger_tables_extend_the_reference_block() {
    let big = cmd_table(8).unwrap();
    let small = cmd_table(5).unwrap();
    assert_eq!(&big.rows().unwrap()[..10], small.rows().unwrap());
    let d6k2 = big.rows().unwrap().iter().find_map(|r| {
        let r = r.as_map()?;
        (r["d"].as_u64() == Some(6) && r["k"].as_u64() == Some(2)).then(|| r["kappa"].clone())
    });
    assert_eq!(d6k2.unwrap().as_rational(), Some(&rat(5, 11)));
}

#[test]
fn worked_margin() {
    let k = SubsetK::parse(5, "1,2,3,5").unwrap();
    let b = bracket_margin(&k).unwrap();
    assert_eq!(b, rat(47, 252));
    assert_eq!(kappa_from_bracket(&b, 4).unwrap(), rat(125, 441));
    assert_eq!(reflect_subset(&k), SubsetK::parse(5, "1,3,4,5").unwrap());
}

#[test]
fn caps_are_errors() {
    assert!(bracket_margin(&SubsetK::full(9).unwrap()).is_err());
    assert!(kappa_lower_tail(13, 2).is_err());
    assert!(kappa_product_order(13).is_err());
    assert!(cmd_table(1).is_err() && cmd_table(13).is_err());
    assert!(SubsetK::parse(5, "1").is_err());
    assert!(SubsetK::parse(5, "1,1").is_err());
    assert!(SubsetK::parse(5, "0,2").is_err());
}
