use kendall_order::appendix::{s_n, sn_partial_integral};
use kendall_order::exact::{factorial, partial_simplex_integral, rat, simplex_integral, to_f64, SparsePoly};
use kendall_order::product_order::{hessenberg_determinant, hessenberg_entry, hpit_polynomial};
use kendall_order::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const DIM: usize = 3;

/// Evaluates term by term with repeated multiplication.
fn slow_eval(p: &SparsePoly, x: &[BigRational]) -> BigRational {
    let mut total = BigRational::zero();
    for (e, c) in p.terms() {
        let mut t = c.clone();
        for (i, xi) in x.iter().enumerate() {
            for _ in 0..e.get(i + 1) {
                t *= xi;
            }
        }
        total += t;
    }
    total
}

fn q() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..4, DIM), q()), 0..6)
        .prop_map(|terms| SparsePoly::from_terms(DIM, terms).unwrap())
}

fn points() -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    prop::collection::vec(prop::collection::vec(q(), DIM), 50)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn add_and_mul_commute_with_evaluation(p in poly(), r in poly(), pts in points()) {
        let sum = &p + &r;
        let prod = &p * &r;
        for x in &pts {
            let (a, b) = (slow_eval(&p, x), slow_eval(&r, x));
            prop_assert_eq!(slow_eval(&sum, x), &a + &b);
            prop_assert_eq!(slow_eval(&prod, x), &a * &b);
            prop_assert_eq!(p.eval(x).unwrap(), a);
        }
    }

    #[test]
    fn integration_is_linear(p in poly(), r in poly(), a in q(), b in q()) {
        let combo = &p.scale(&a) + &r.scale(&b);
        let lhs = simplex_integral(&combo).unwrap();
        let rhs = a * simplex_integral(&p).unwrap() + b * simplex_integral(&r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substituting_constants_matches_evaluation(p in poly(), x in prop::collection::vec(q(), DIM)) {
        use kendall_order::exact::Substitution;
        let map: Vec<_> = x.iter().cloned().map(Substitution::Const).collect();
        let c = p.substitute(&map, 1).unwrap();
        prop_assert_eq!(c.as_constant().unwrap(), slow_eval(&p, &x));
    }
}

fn exponent_vectors(d: usize, max_total: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=max_total {
        for mut rest in exponent_vectors(d - 1, max_total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Power rule: the iterated integral of `Π u_i^{a_i}` is
/// `Π_i 1 / (a_1 + ... + a_i + i)`.
fn power_rule(a: &[u32]) -> BigRational {
    let mut acc = BigRational::one();
    let mut s = 0i64;
    for (i, &ai) in a.iter().enumerate() {
        s += ai as i64;
        acc /= rat(s + i as i64 + 1, 1);
    }
    acc
}

/// `F_1(x) = ∫_0^x t^{a_1} dt`, `F_i(x) = ∫_0^x t^{a_i} F_{i-1}(t) dt`,
/// by cumulative trapezoid sums on a uniform grid; returns `F_d(1)`.
fn trapezoid_fubini(a: &[u32], cells: usize) -> f64 {
    let h = 1.0 / cells as f64;
    let xs: Vec<f64> = (0..=cells).map(|j| j as f64 * h).collect();
    let mut inner = vec![1.0; cells + 1];
    for &ai in a {
        let integrand: Vec<f64> = xs.iter().zip(&inner).map(|(x, f)| x.powi(ai as i32) * f).collect();
        let mut cum = vec![0.0; cells + 1];
        for j in 1..=cells {
            cum[j] = cum[j - 1] + 0.5 * h * (integrand[j - 1] + integrand[j]);
        }
        inner = cum;
    }
    inner[cells]
}

#[test]
fn monomials_match_power_rule_and_fine_grid() {
    for d in 1..=4 {
        for a in exponent_vectors(d, 6) {
            let m = SparsePoly::from_terms(d, [(a.clone(), BigRational::one())]).unwrap();
            let exact = simplex_integral(&m).unwrap();
            assert_eq!(exact, power_rule(&a), "{a:?}");
            let grid = trapezoid_fubini(&a, 20_000);
            let rel = (grid - to_f64(&exact)).abs() / to_f64(&exact);
            assert!(rel < 1e-3, "{a:?}: {grid} vs {exact}");
        }
    }
}

/// Laplace expansion along the first column of the remaining rows, skipping
/// zero entries.
fn laplace(m: &[Vec<SparsePoly>], rows: &[usize], col: usize, dim: usize) -> SparsePoly {
    if rows.is_empty() {
        return SparsePoly::one(dim);
    }
    let mut acc = SparsePoly::zero(dim);
    for (pos, &r) in rows.iter().enumerate() {
        if m[r][col].is_zero() {
            continue;
        }
        let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let term = &m[r][col] * &laplace(m, &rest, col + 1, dim);
        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `a_{i,j} = u_i^{j-i+1} / (j-i+1)!` for `j >= i - 1`, zero below the
/// subdiagonal.
fn matrix(n: usize) -> Vec<Vec<SparsePoly>> {
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    if j + 1 < i {
                        return SparsePoly::zero(n);
                    }
                    let p = (j + 1 - i) as u32;
                    let mut e = vec![0; n];
                    e[i - 1] = p;
                    SparsePoly::from_terms(n, [(e, BigRational::new(1.into(), factorial(p)))]).unwrap()
                })
                .collect()
        })
        .collect()
}

#[test]
fn determinant_recursion_matches_laplace_expansion() {
    for n in 1..=8 {
        let oracle = laplace(&matrix(n), &(0..n).collect::<Vec<_>>(), 0, n);
        let recursion = hessenberg_determinant(n, n, |i, j| hessenberg_entry(n, i, j)).unwrap();
        assert_eq!(recursion, oracle, "n={n}");
        assert_eq!(s_n(n).unwrap(), oracle, "n={n}");
        let nf = BigRational::from_integer(factorial(n as u32));
        assert_eq!(hpit_polynomial(n).unwrap(), oracle.scale(&nf), "n={n}");
    }
}

/// `P(U_(i) <= x_i for all i)` for sorted `x`: the number of points below
/// `x_j` must be at least `j`. Dynamic program over the gaps
/// `[x_{j-1}, x_j)` tracking how many points have been placed.
fn order_statistics_cdf(x: &[BigRational]) -> BigRational {
    let d = x.len();
    // ways[c] = Σ Π ℓ_j^{n_j} / n_j! over placements of c points so far
    let mut ways = vec![BigRational::zero(); d + 1];
    ways[0] = BigRational::one();
    let mut prev = BigRational::zero();
    for (j, xj) in x.iter().enumerate() {
        let len = xj - &prev;
        let mut next = vec![BigRational::zero(); d + 1];
        for c in 0..=d {
            if ways[c].is_zero() {
                continue;
            }
            let mut pow = BigRational::one();
            for add in 0..=d - c {
                let f = BigRational::from_integer(factorial(add as u32));
                next[c + add] += &ways[c] * &pow / f;
                pow *= &len;
            }
        }
        for (c, w) in next.iter_mut().enumerate() {
            if c < j + 1 {
                *w = BigRational::zero();
            }
        }
        ways = next;
        prev = xj.clone();
    }
    &ways[d] * BigRational::from_integer(factorial(d as u32))
}

#[test]
fn hpit_is_the_distribution_of_order_statistics() {
    let grid = [rat(1, 7), rat(1, 3), rat(1, 2), rat(3, 5), rat(4, 5), rat(1, 1)];
    for d in 1..=6 {
        let h = hpit_polynomial(d).unwrap();
        // every nondecreasing choice of d grid values
        let mut idx = vec![0usize; d];
        loop {
            let x: Vec<BigRational> = idx.iter().map(|&i| grid[i].clone()).collect();
            assert_eq!(h.eval(&x).unwrap(), order_statistics_cdf(&x), "x={x:?}");
            let Some(pos) = (0..d).rev().find(|&p| idx[p] + 1 < grid.len()) else {
                break;
            };
            idx[pos] += 1;
            let v = idx[pos];
            idx[pos..].iter_mut().for_each(|i| *i = v);
        }
    }
}

#[test]
fn sn_partial_integral_up_to_ten() {
    for n in 1..=10 {
        let lifted = s_n(n).unwrap().lift(n + 1).unwrap();
        let partial = partial_simplex_integral(&lifted).unwrap();
        assert_eq!(partial, sn_partial_integral(n).unwrap(), "n={n}");
        let mut e = vec![0; n + 1];
        e[n] = 2 * n as u32;
        let expected = BigRational::new(1.into(), factorial(n as u32) * factorial(n as u32 + 1));
        assert_eq!(partial.coefficient(&e), expected);
        assert_eq!(partial.num_terms(), 1);
    }
}
