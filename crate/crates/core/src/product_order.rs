//! Exact results for the order transform `Π_T` of the product copula.
//!
//! On the ordered simplex the distribution function of the order statistic
//! of `d` independent uniforms is `d! · det A_d(u)`, where `A_d(u)` is the
//! lower Hessenberg matrix with entries `u_i^{j-i+1} / (j-i+1)!` for
//! `i <= j + 1` and zero below the first subdiagonal. Brackets of margins
//! `ρ_K(Π_T)` are `d!` times the simplex integral of that polynomial after
//! the coordinates outside `K` are replaced by their upper envelope.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{binomial, factorial, simplex_integral, SparsePoly, Substitution};
use crate::report::Report;
use crate::{Error, Result};

/// Largest dimension for which closed forms are evaluated.
pub const CLOSED_FORM_CAP: usize = 12;
/// Largest dimension for which margin brackets are integrated symbolically.
pub const INTEGRATION_CAP: usize = 8;

/// A coordinate subset `K ⊆ {1..d}` with `|K| >= 2`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetK {
    d: usize,
    members: Vec<usize>,
}

impl SubsetK {
    /// Members may be given in any order; duplicates are rejected.
    pub fn new(d: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("duplicate index in {members:?}")));
        }
        if members.len() < 2 {
            return Err(Error::InvalidSubset(format!(
                "|K| = {} but at least 2 coordinates are required",
                members.len()
            )));
        }
        if members.len() > d {
            return Err(Error::InvalidSubset(format!("|K| = {} exceeds d = {d}", members.len())));
        }
        if let Some(bad) = members.iter().find(|&&m| m == 0 || m > d) {
            return Err(Error::InvalidSubset(format!("index {bad} is not in 1..={d}")));
        }
        Ok(Self { d, members })
    }

    /// `{1, ..., d}`.
    pub fn full(d: usize) -> Result<Self> {
        Self::new(d, (1..=d).collect())
    }

    /// `{1, ..., k}` inside dimension `d`.
    pub fn lower(d: usize, k: usize) -> Result<Self> {
        Self::new(d, (1..=k).collect())
    }

    /// Parses a comma separated list such as `1,2,3,5`.
    pub fn parse(d: usize, s: &str) -> Result<Self> {
        let members = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("`{t}` is not a coordinate index")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, members)
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.d
    }

    /// Every subset of `{1..d}` with at least two members, in lexicographic
    /// order of their bitmasks.
    pub fn all(d: usize) -> Vec<SubsetK> {
        (0u64..(1 << d))
            .filter(|mask| mask.count_ones() >= 2)
            .map(|mask| {
                let members = (1..=d).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                SubsetK { d, members }
            })
            .collect()
    }
}

impl std::fmt::Display for SubsetK {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Determinant of a lower Hessenberg matrix (`a_{j+1,j} = 1`, zero below)
/// via `det A_n = Σ_{i=1}^n (-1)^{i+n} a_{i,n} det A_{i-1}`, `det A_0 = 1`.
///
/// `entry(i, j)` returns `a_{i,j}` for `i <= j` (1-based); the subdiagonal
/// is implicitly 1. Uses `O(n^2)` polynomial multiplications.
pub fn hessenberg_determinant<F>(n: usize, dim: usize, mut entry: F) -> Result<SparsePoly>
where
    F: FnMut(usize, usize) -> Result<SparsePoly>,
{
    let mut dets = Vec::with_capacity(n + 1);
    dets.push(SparsePoly::one(dim));
    for col in 1..=n {
        let mut acc = SparsePoly::zero(dim);
        for i in 1..=col {
            let term = entry(i, col)?.try_mul(&dets[i - 1])?;
            acc = if (i + col) % 2 == 0 {
                acc.try_add(&term)?
            } else {
                acc.try_sub(&term)?
            };
        }
        dets.push(acc);
    }
    Ok(dets.pop().expect("at least det A_0"))
}

/// The Hessenberg entry `a_{i,j}(u) = u_i^{j-i+1} / (j-i+1)!` for `i <= j`.
pub fn hessenberg_entry(dim: usize, i: usize, j: usize) -> Result<SparsePoly> {
    debug_assert!(i <= j);
    SparsePoly::scaled_power(dim, i, (j - i + 1) as u32)
}

/// `H^Π_T(u) = d! det A_d(u)`, valid for `u_1 <= ... <= u_d`.
pub fn hpit_polynomial(d: usize) -> Result<SparsePoly> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            value: 0,
            range: ">= 1".into(),
        });
    }
    let det = hessenberg_determinant(d, d, |i, j| hessenberg_entry(d, i, j))?;
    Ok(det.scale(&BigRational::from_integer(factorial(d as u32))))
}

/// Evaluates `H^Π_T` at an arbitrary point of `[0,1]^d` in floating point.
///
/// The event `{T(U) <= x}` equals `{T(U) <= x*}` where `x*_j = min_{i >= j}
/// x_i` is the running minimum from the right, which is sorted, so the
/// polynomial applies.
#[derive(Debug, Clone)]
pub struct HpitEvaluator {
    poly: crate::exact::PolyF64,
}

impl HpitEvaluator {
    pub fn new(d: usize) -> Result<Self> {
        Ok(Self {
            poly: hpit_polynomial(d)?.to_f64_evaluator(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.poly.dimension()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut env: Vec<f64> = x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        for j in (0..env.len().saturating_sub(1)).rev() {
            env[j] = env[j].min(env[j + 1]);
        }
        self.poly.eval(&env).clamp(0.0, 1.0)
    }
}

/// Rewrites `η_K(1, u)` for sorted `u` as a sorted argument vector: a
/// coordinate `j ∉ K` becomes the variable of the smallest member of `K`
/// above `j`, or the constant 1 if there is none.
pub fn envelope_substitution(k: &SubsetK) -> Vec<Substitution> {
    (1..=k.dimension())
        .map(|j| match k.members().iter().find(|&&m| m >= j) {
            Some(&m) => Substitution::Var(m),
            None => Substitution::one(),
        })
        .collect()
}

/// `[ρ_K(Π_T), ρ_K(Π_T)] = d! ∫_{T(I^d)} H^Π_T(η_K(1, u)) du`.
pub fn bracket_margin(k: &SubsetK) -> Result<BigRational> {
    let d = k.dimension();
    if d > INTEGRATION_CAP {
        return Err(Error::DimensionCap {
            d,
            cap: INTEGRATION_CAP,
            what: "symbolic margin integration",
        });
    }
    let h = hpit_polynomial(d)?.substitute(&envelope_substitution(k), d)?;
    let integral = simplex_integral(&h)?;
    Ok(integral * BigRational::from_integer(factorial(d as u32)))
}

fn pow2(e: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << e)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Kendall's tau of an `m`-variate copula from its bracket:
/// `(2^m [C,C] - 1) / (2^{m-1} - 1)`.
pub fn kappa_from_bracket(bracket: &BigRational, m: usize) -> Result<BigRational> {
    if m < 2 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            range: ">= 2".into(),
        });
    }
    let half = BigRational::new(1.into(), 2.into());
    if bracket < &BigRational::zero() || bracket > &half {
        return Err(Error::Domain(format!("bracket {bracket} is not in [0, 1/2]")));
    }
    Ok((pow2(m) * bracket - BigRational::one()) / (pow2(m - 1) - BigRational::one()))
}

fn check_closed_form_dim(d: usize) -> Result<()> {
    if d > CLOSED_FORM_CAP {
        return Err(Error::DimensionCap {
            d,
            cap: CLOSED_FORM_CAP,
            what: "closed forms",
        });
    }
    Ok(())
}

/// `κ[Π_T] = (2^d - (d+1)) / ((2^{d-1} - 1)(d+1))`.
pub fn kappa_product_order(d: usize) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::OutOfRange {
            what: "d",
            value: d as i64,
            range: ">= 2".into(),
        });
    }
    check_closed_form_dim(d)?;
    let num = (BigInt::one() << d) - BigInt::from(d + 1);
    let den = ((BigInt::one() << (d - 1)) - BigInt::one()) * BigInt::from(d + 1);
    Ok(ratio(num, den))
}

fn check_tail(d: usize, k: usize) -> Result<()> {
    if k < 2 || k > d {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            range: format!("2..={d}"),
        });
    }
    check_closed_form_dim(d)
}

/// `Σ_{h=2}^k C(2h,h) C(2d+2-2h, d+1-h) / ((2h-1) C(2d,d))`.
fn small_k_sum(d: usize, k: usize) -> BigRational {
    let (d, k) = (d as i64, k as i64);
    let central = binomial(2 * d, d);
    (2..=k)
        .map(|h| {
            ratio(
                binomial(2 * h, h) * binomial(2 * d + 2 - 2 * h, d + 1 - h),
                BigInt::from(2 * h - 1) * &central,
            )
        })
        .sum()
}

/// Bracket of `ρ_{1..k}(Π_T)` from the form suited to small `k`:
/// `1/2 - (1/4) Σ_{h=2}^k ...`.
pub fn bracket_lower_tail_small_k(d: usize, k: usize) -> Result<BigRational> {
    check_tail(d, k)?;
    Ok(BigRational::new(1.into(), 2.into()) - small_k_sum(d, k) / BigRational::from_integer(4.into()))
}

/// Bracket of `ρ_{1..k}(Π_T)` from the form suited to large `k`:
/// `1/(d+1) + (1/2d) Σ_{l=1}^{d-k} C(d,l-1) C(d,l) / C(2d-1,2l-1)`.
pub fn bracket_lower_tail_large_k(d: usize, k: usize) -> Result<BigRational> {
    check_tail(d, k)?;
    let di = d as i64;
    let sum: BigRational = (1..=(di - k as i64))
        .map(|l| ratio(binomial(di, l - 1) * binomial(di, l), binomial(2 * di - 1, 2 * l - 1)))
        .sum();
    Ok(ratio(1.into(), BigInt::from(d + 1)) + sum / BigRational::from_integer(BigInt::from(2 * d)))
}

/// `κ[ρ_{1..k}(Π_T)]` for `2 <= k <= d`.
///
/// Both closed forms are evaluated; any disagreement is reported as
/// [`Error::Internal`]. At `k = d` the bracket is `1/(d+1)` and the returned
/// tau equals [`kappa_product_order`]`(d)`; the value `1/(d+1)` is the
/// bracket, not Kendall's tau.
pub fn kappa_lower_tail(d: usize, k: usize) -> Result<BigRational> {
    check_tail(d, k)?;
    let direct = BigRational::one() - pow2(k - 2) / (pow2(k - 1) - BigRational::one()) * small_k_sum(d, k);
    let via_small = kappa_from_bracket(&bracket_lower_tail_small_k(d, k)?, k)?;
    let via_large = kappa_from_bracket(&bracket_lower_tail_large_k(d, k)?, k)?;
    if direct != via_small || direct != via_large {
        return Err(Error::Internal(format!(
            "lower-tail closed forms disagree at d={d}, k={k}: {direct} vs {via_small} vs {via_large}"
        )));
    }
    Ok(direct)
}

/// `lim_{d→∞} κ[ρ_{1..k}(Π_T)] = 1 - 2^{k-2}/(2^{k-1}-1) Σ_{h=2}^k C(2h,h) / ((2h-1) 2^{2h-2})`.
pub fn kappa_lower_tail_limit(k: usize) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            range: ">= 2".into(),
        });
    }
    let sum: BigRational = (2..=k as i64)
        .map(|h| {
            ratio(
                binomial(2 * h, h),
                BigInt::from(2 * h - 1) * (BigInt::one() << (2 * h - 2)),
            )
        })
        .sum();
    Ok(BigRational::one() - pow2(k - 2) / (pow2(k - 1) - BigRational::one()) * sum)
}

/// Mirrors `K` through `i ↦ d - i + 1`.
pub fn reflect_subset(k: &SubsetK) -> SubsetK {
    let d = k.dimension();
    let mut members: Vec<usize> = k.members().iter().map(|&i| d - i + 1).collect();
    members.reverse();
    SubsetK { d, members }
}

/// `[ρ_K(Π_T), ρ_K(Π_T)] = [ρ_{b(K)}(Π_T), ρ_{b(K)}(Π_T)]` for every `K`
/// with `|K| >= 2` and every `2 <= d <= d_max`.
pub fn check_reflection(d_max: usize) -> Result<Report> {
    if d_max > INTEGRATION_CAP {
        return Err(Error::DimensionCap {
            d: d_max,
            cap: INTEGRATION_CAP,
            what: "symbolic margin integration",
        });
    }
    let mut report = Report::new("reflection");
    for d in 2..=d_max {
        for k in SubsetK::all(d) {
            let mirrored = reflect_subset(&k);
            if mirrored < k {
                continue;
            }
            let (b, b_mirror) = (bracket_margin(&k)?, bracket_margin(&mirrored)?);
            report.push(
                format!("d={d} K={k} b(K)={mirrored}"),
                b == b_mirror,
                format!("{b} vs {b_mirror}"),
            );
        }
    }
    Ok(report)
}

/// Bracket integration against both closed forms for `K = {1..k}`, and
/// against [`kappa_product_order`] for `K = {1..d}`.
pub fn check_bracket_equivalence(d_max: usize) -> Result<Report> {
    let mut report = Report::new("bracket-equivalence");
    for d in 2..=d_max {
        for k in 2..=d {
            let integrated = kappa_from_bracket(&bracket_margin(&SubsetK::lower(d, k)?)?, k)?;
            let closed = kappa_lower_tail(d, k)?;
            report.push(
                format!("d={d} k={k}"),
                integrated == closed,
                format!("{integrated} vs {closed}"),
            );
        }
        let full = kappa_from_bracket(&bracket_margin(&SubsetK::full(d)?)?, d)?;
        let closed = kappa_product_order(d)?;
        report.push(format!("d={d} K=full"), full == closed, format!("{full} vs {closed}"));
    }
    Ok(report)
}

/// Monotonicity and range properties of the closed forms for `d <= d_max`:
/// tau of `ρ_{1..k}(Π_T)` strictly decreases in `k`, increases in `d` for
/// `k <= 5` and stays below its limit; every tau lies in
/// `[-1/(2^{m-1}-1), 1]`; `κ[Π_T]` is positive and decreasing in `d`.
pub fn check_monotonicity(d_max: usize) -> Result<Report> {
    check_closed_form_dim(d_max)?;
    let mut report = Report::new("monotonicity");
    let one = BigRational::one();
    for d in 3..=d_max {
        let taus = (2..=d).map(|k| kappa_lower_tail(d, k)).collect::<Result<Vec<_>>>()?;
        let ok = taus.windows(2).all(|w| w[0] > w[1]);
        report.push(
            format!("decreasing in k, d={d}"),
            ok,
            format!("{taus:?}").replace('"', ""),
        );
    }
    for k in 2..=5.min(d_max) {
        let limit = kappa_lower_tail_limit(k)?;
        let taus = (k..=d_max)
            .map(|d| kappa_lower_tail(d, k))
            .collect::<Result<Vec<_>>>()?;
        let increasing = taus.windows(2).all(|w| w[0] < w[1]);
        let below = taus.iter().all(|t| t < &limit);
        report.push(
            format!("increasing in d below limit {limit}, k={k}"),
            increasing && below,
            format!("last {}", taus.last().expect("k <= d_max")),
        );
    }
    let mut in_bounds = true;
    for d in 2..=d_max {
        for k in 2..=d {
            let t = kappa_lower_tail(d, k)?;
            let lower = -(&one / (pow2(k - 1) - &one));
            in_bounds &= t >= lower && t <= one;
        }
    }
    report.push("bounds", in_bounds, format!("all tails with d <= {d_max}"));
    let taus = (2..=d_max).map(kappa_product_order).collect::<Result<Vec<_>>>()?;
    let positive = taus.iter().all(|t| t > &BigRational::zero());
    let decreasing = taus.windows(2).all(|w| w[0] >= w[1]);
    report.push(
        "kappa[Pi_T] positive and nonincreasing in d",
        positive && decreasing,
        format!("d=2..={d_max}: first {}, last {}", taus[0], taus[taus.len() - 1]),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn subset_validation() {
        assert!(SubsetK::new(2, vec![2]).is_err());
        assert!(SubsetK::new(3, vec![1, 1]).is_err());
        assert!(SubsetK::new(3, vec![0, 2]).is_err());
        assert!(SubsetK::new(3, vec![1, 4]).is_err());
        assert_eq!(SubsetK::new(5, vec![5, 1, 3]).unwrap().members(), &[1, 3, 5]);
        assert_eq!(SubsetK::parse(5, "1, 2,3,5").unwrap().to_string(), "{1,2,3,5}");
        assert!(SubsetK::parse(5, "1,x").is_err());
    }

    #[test]
    fn subsets_at_d6() {
        assert_eq!(SubsetK::all(6).len(), 57);
        assert_eq!(SubsetK::all(2).len(), 1);
    }

    #[test]
    fn hpit_d2() {
        let h = hpit_polynomial(2).unwrap();
        let expected = SparsePoly::from_terms(2, [(vec![1, 1], rat(2, 1)), (vec![2, 0], rat(-1, 1))]).unwrap();
        assert_eq!(h, expected);
        assert_eq!(h.eval(&[rat(1, 1), rat(1, 1)]).unwrap(), rat(1, 1));
    }

    #[test]
    fn hpit_is_one_at_upper_corner_and_bounded_degree() {
        for d in 1..=8 {
            let h = hpit_polynomial(d).unwrap();
            assert_eq!(h.eval(&vec![rat(1, 1); d]).unwrap(), rat(1, 1), "d = {d}");
            assert!(h.total_degree() < 2 * d as u32);
        }
    }

    #[test]
    fn envelope_examples() {
        use Substitution::*;
        let k = SubsetK::new(5, vec![1, 2, 3, 5]).unwrap();
        assert_eq!(envelope_substitution(&k), vec![Var(1), Var(2), Var(3), Var(5), Var(5)]);
        let full = SubsetK::full(4).unwrap();
        assert_eq!(envelope_substitution(&full), vec![Var(1), Var(2), Var(3), Var(4)]);
        let k13 = SubsetK::new(3, vec![1, 3]).unwrap();
        assert_eq!(envelope_substitution(&k13), vec![Var(1), Var(3), Var(3)]);
        let low = SubsetK::new(4, vec![1, 2]).unwrap();
        assert_eq!(
            envelope_substitution(&low),
            vec![Var(1), Var(2), Substitution::one(), Substitution::one()]
        );
    }

    #[test]
    fn worked_example_bracket() {
        let k = SubsetK::new(5, vec![1, 2, 3, 5]).unwrap();
        assert_eq!(bracket_margin(&k).unwrap(), rat(47, 252));
        let k = SubsetK::new(5, vec![1, 2, 3]).unwrap();
        assert_eq!(bracket_margin(&k).unwrap(), rat(71, 252));
    }

    #[test]
    fn full_bracket_is_one_over_d_plus_one() {
        for d in 2..=6 {
            assert_eq!(
                bracket_margin(&SubsetK::full(d).unwrap()).unwrap(),
                rat(1, d as i64 + 1)
            );
        }
    }

    #[test]
    fn bracket_cap_is_enforced() {
        let k = SubsetK::full(9).unwrap();
        assert!(matches!(bracket_margin(&k), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn kappa_from_bracket_examples() {
        assert_eq!(kappa_from_bracket(&rat(1, 2), 3).unwrap(), rat(1, 1));
        assert_eq!(kappa_from_bracket(&rat(1, 8), 3).unwrap(), rat(0, 1));
        assert_eq!(kappa_from_bracket(&rat(47, 252), 4).unwrap(), rat(125, 441));
        assert!(kappa_from_bracket(&rat(1, 4), 1).is_err());
        assert!(kappa_from_bracket(&rat(3, 4), 2).is_err());
    }

    #[test]
    fn kappa_product_order_examples() {
        assert_eq!(kappa_product_order(2).unwrap(), rat(1, 3));
        assert_eq!(kappa_product_order(3).unwrap(), rat(1, 3));
        assert_eq!(kappa_product_order(5).unwrap(), rat(13, 45));
        assert!(kappa_product_order(1).is_err());
        assert!(kappa_product_order(13).is_err());
    }

    #[test]
    fn lower_tail_examples() {
        assert_eq!(kappa_lower_tail(5, 2).unwrap(), rat(4, 9));
        assert_eq!(kappa_lower_tail(5, 3).unwrap(), rat(79, 189));
        assert_eq!(kappa_lower_tail(4, 4).unwrap(), rat(297, 945));
        assert_eq!(kappa_lower_tail(4, 4).unwrap(), kappa_product_order(4).unwrap());
        assert!(kappa_lower_tail(5, 1).is_err());
        assert!(kappa_lower_tail(5, 6).is_err());
    }

    #[test]
    fn lower_tail_limits() {
        assert_eq!(kappa_lower_tail_limit(2).unwrap(), rat(1, 2));
        // 1 - (2/3) * (1/2 + 1/4)
        assert_eq!(kappa_lower_tail_limit(3).unwrap(), rat(1, 2));
        // 1 - (4/7) * (1/2 + 1/4 + 5/32)
        assert_eq!(kappa_lower_tail_limit(4).unwrap(), rat(27, 56));
        for d in 2..=12 {
            assert!(kappa_lower_tail(d, 2).unwrap() < rat(1, 2));
        }
    }

    #[test]
    fn reflection_examples() {
        let r = reflect_subset(&SubsetK::new(5, vec![1, 2, 3, 5]).unwrap());
        assert_eq!(r.members(), &[1, 3, 4, 5]);
        assert_eq!(reflect_subset(&SubsetK::new(5, vec![1, 2]).unwrap()).members(), &[4, 5]);
        assert_eq!(reflect_subset(&SubsetK::new(4, vec![1, 4]).unwrap()).members(), &[1, 4]);
    }

    #[test]
    fn suites_pass() {
        assert!(check_reflection(5).unwrap().all_passed());
        assert!(check_bracket_equivalence(5).unwrap().all_passed());
        let r = check_monotonicity(10).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(check_reflection(9).is_err());
    }

    #[test]
    fn hpit_evaluator_uses_running_minimum() {
        let ev = HpitEvaluator::new(3).unwrap();
        let exact = hpit_polynomial(3).unwrap();
        let sorted = exact.eval(&[rat(1, 5), rat(3, 5), rat(3, 5)]).unwrap();
        let v = ev.eval(&[0.2, 1.0, 0.6]);
        assert!((v - crate::exact::to_f64(&sorted)).abs() < 1e-12);
    }
}
