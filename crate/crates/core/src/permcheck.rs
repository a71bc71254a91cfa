//! Permutation behaviour of `F_n(1, x)` on GF(q).
//!
//! The brute-force verdict is the arbiter. Everything else in here is either
//! an exact criterion (`n = p^k`, `2 p^k`), an equivalent reformulation (the
//! two-to-one test on `GF(q) ∪ V`) or a necessary condition, and [`scan`]
//! records all of them side by side so that disagreements surface.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dickson::{f3_eval_recurrence, functional_g, quarter_point_value, OddField};
use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec, QuadExt};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// True if `values` hits every element of `field` exactly once.
pub fn is_bijection<I>(field: &FieldSpec, values: I) -> bool
where
    I: IntoIterator<Item = FieldElem>,
{
    let mut seen = vec![false; field.order() as usize];
    let mut count = 0u64;
    for v in values {
        let slot = &mut seen[field.index(&v) as usize];
        if *slot {
            return false;
        }
        *slot = true;
        count += 1;
    }
    count == field.order()
}

/// Brute force: does `x -> F_n(1, x)` permute GF(q)?
pub fn is_permutation(field: &OddField, n: u64) -> bool {
    is_bijection(field, field.elements().map(|x| f3_eval_recurrence(field, n, &x)))
}

/// Writes `n` as `p^k` or `2 p^k` with `k >= 1`: returns `(k, multiplier)`.
pub fn prime_power_shape(p: u64, n: u64) -> Option<(u32, u64)> {
    let (mult, mut rest) = if n % 2 == 0 { (2, n / 2) } else { (1, n) };
    let mut k = 0;
    while rest > 1 && rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1 && k >= 1).then_some((k, mult))
}

fn pk_gcd_criterion(field: &FieldSpec, k: u32) -> bool {
    let pk = field.p().pow(k);
    gcd((pk - 1) / 2, field.order() - 1) == 1
}

/// For `n = p^k` or `2 p^k` with `1 <= k <= e`: PP iff
/// `gcd((p^k - 1) / 2, q - 1) = 1`. `None` for any other `n`.
pub fn exact_criterion_pk(field: &OddField, n: u64) -> Option<bool> {
    match prime_power_shape(field.p(), n) {
        Some((k, _)) if k <= field.degree() => Some(pk_gcd_criterion(field, k)),
        _ => None,
    }
}

/// The same gcd value for `k > e`, where no equivalence is claimed.
pub fn extrapolated_criterion_pk(field: &OddField, n: u64) -> Option<bool> {
    match prime_power_shape(field.p(), n) {
        Some((k, _)) if k > field.degree() => {
            // p^k may overflow for absurd k; such n never reach the scan
            field.p().checked_pow(k).map(|_| pk_gcd_criterion(field, k))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterOutcome {
    pub name: &'static str,
    pub applicable: bool,
    pub passed: bool,
}

impl FilterOutcome {
    /// A PP must not fail an applicable filter.
    pub fn violated_by_pp(&self) -> bool {
        self.applicable && !self.passed
    }
}

pub const FILTER_MOD6: &str = "mod6";
pub const FILTER_EVEN: &str = "even";
pub const FILTER_DIV3: &str = "div3";
pub const FILTER_SUM: &str = "sum";

/// A PP in odd characteristic has `n mod 6` outside `{1, 2}`.
pub fn filter_mod6(_field: &OddField, n: u64) -> FilterOutcome {
    FilterOutcome {
        name: FILTER_MOD6,
        applicable: true,
        passed: !matches!(n % 6, 1 | 2),
    }
}

/// For even `n` with `p ∤ n`: a PP needs `4 | n` and
/// `gcd(floor((n-1)/2), q - 1) = 1`.
pub fn filter_even(field: &OddField, n: u64) -> FilterOutcome {
    let applicable = n % 2 == 0 && n % field.p() != 0;
    let passed = applicable && n % 4 == 0 && gcd((n - 1) / 2, field.order() - 1) == 1;
    FilterOutcome {
        name: FILTER_EVEN,
        applicable,
        passed,
    }
}

/// For `p > 3` and `3 | n`: a PP needs `gcd(n, q^2 - 1) = 3`.
pub fn filter_div3(field: &OddField, n: u64) -> FilterOutcome {
    let applicable = field.p() > 3 && n % 3 == 0;
    let q = field.order();
    let passed = applicable && gcd(n, q * q - 1) == 3;
    FilterOutcome {
        name: FILTER_DIV3,
        applicable,
        passed,
    }
}

/// A PP sums to `sum_{a} a = 0` over GF(q).
pub fn filter_sum(value_sum: &FieldElem) -> FilterOutcome {
    FilterOutcome {
        name: FILTER_SUM,
        applicable: true,
        passed: value_sum.is_zero(),
    }
}

/// `V = { x in GF(q^2) : x^q = 1 - x }`.
#[derive(Debug, Clone)]
pub struct VSet {
    pub elements: Vec<FieldElem>,
}

/// Enumerates GF(q^2) for `V`, checking `|V| = q` and `GF(q) ∩ V = {1/2}`.
pub fn build_v(field: &OddField) -> Result<VSet> {
    let qe = field.quad_ext()?;
    build_v_in(field, &qe)
}

fn build_v_in(field: &OddField, qe: &QuadExt) -> Result<VSet> {
    let big = qe.ext();
    let q = field.order();
    let one = big.one();
    let elements: Vec<_> = big
        .elements()
        .filter(|x| big.pow(x, q) == big.sub(&one, x))
        .collect();
    if elements.len() as u64 != q {
        return Err(Error::Internal(format!(
            "|V| = {} but q = {q}",
            elements.len()
        )));
    }
    let shared: Vec<_> = elements.iter().filter(|v| qe.in_base(v)).collect();
    let half = qe.embed(field.half());
    if shared != [&half] {
        return Err(Error::Internal(format!(
            "GF(q) ∩ V = {shared:?}, expected {{1/2}}"
        )));
    }
    Ok(VSet { elements })
}

/// `(GF(q) ∪ V) \ {1/2}` inside GF(q^2), the domain of the two-to-one test.
#[derive(Debug, Clone)]
pub struct TwoToOneDomain {
    qe: std::sync::Arc<QuadExt>,
    points: Vec<FieldElem>,
}

impl TwoToOneDomain {
    pub fn new(field: &OddField) -> Result<Self> {
        let qe = field.quad_ext()?;
        let v = build_v_in(field, &qe)?;
        let half = qe.embed(field.half());
        let mut points: Vec<_> = field
            .elements()
            .map(|x| qe.embed(&x))
            .chain(v.elements)
            .filter(|y| *y != half)
            .collect();
        points.sort();
        points.dedup();
        Ok(TwoToOneDomain { qe, points })
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    /// `g(y) = (y^n - (1-y)^n) / (2y - 1)` is exactly 2-to-1 on the domain
    /// and never takes the value `n / 2^(n-1)`.
    pub fn test(&self, field: &OddField, n: u64) -> bool {
        let big = self.qe.ext();
        let forbidden = self.qe.embed(&quarter_point_value(field, n));
        let mut fibers: HashMap<FieldElem, u32> = HashMap::with_capacity(self.points.len());
        for y in &self.points {
            let g = functional_g(big, n, y);
            if g == forbidden {
                return false;
            }
            let count = fibers.entry(g).or_insert(0);
            *count += 1;
            if *count > 2 {
                return false;
            }
        }
        fibers.values().all(|&c| c == 2)
    }
}

pub fn two_to_one_test(field: &OddField, n: u64) -> Result<bool> {
    Ok(TwoToOneDomain::new(field)?.test(field, n))
}

/// Over all `x` in GF(q^2): `x(1-x) ∈ GF(q)` iff `x^q = x` or `x^q = 1 - x`.
pub fn product_membership_scan(field: &OddField) -> Result<bool> {
    let qe = field.quad_ext()?;
    let big = qe.ext();
    let q = field.order();
    let one = big.one();
    let holds = big.elements().all(|x| {
        let one_minus = big.sub(&one, &x);
        let lhs = qe.in_base(&big.mul(&x, &one_minus));
        let xq = big.pow(&x, q);
        lhs == (xq == x || xq == one_minus)
    });
    Ok(holds)
}

/// Over all `eps` in GF(q^2) \ {0, 1}, with `y = (eps + 1) / (eps - 1)`:
/// `y^2 ∈ GF(q)` iff `eps^(q+1) = 1` or `eps^(q-1) = 1`.
pub fn square_membership_scan(field: &OddField) -> Result<bool> {
    let qe = field.quad_ext()?;
    let big = qe.ext();
    let q = field.order();
    let one = big.one();
    let holds = big
        .elements()
        .filter(|eps| !eps.is_zero() && *eps != one)
        .all(|eps| {
            let y = big
                .div(&big.add(&eps, &one), &big.sub(&eps, &one))
                .expect("eps != 1");
            let lhs = qe.in_base(&big.square(&y));
            let rhs = big.pow(&eps, q + 1) == one || big.pow(&eps, q - 1) == one;
            lhs == rhs
        });
    Ok(holds)
}

/// Every verdict gathered for one `(q, n)`.
#[derive(Debug, Clone)]
pub struct PPReport {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    pub n: u64,
    pub is_pp: bool,
    pub filters: Vec<FilterOutcome>,
    /// Present when `n = p^k` or `2 p^k` with `1 <= k <= e`.
    pub exact_criterion: Option<bool>,
    /// The gcd value for `k > e`; recorded, never asserted.
    pub extrapolated_criterion: Option<bool>,
    pub two_to_one: bool,
    /// `sum_{a in GF(q)} F_n(1, a)`.
    pub value_sum: FieldElem,
}

impl PPReport {
    /// Human-readable list of broken invariants; empty when consistent.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.is_pp {
            for f in self.filters.iter().filter(|f| f.violated_by_pp()) {
                out.push(format!("q={} n={}: PP fails filter {}", self.q, self.n, f.name));
            }
        }
        if let Some(c) = self.exact_criterion {
            if c != self.is_pp {
                out.push(format!(
                    "q={} n={}: gcd criterion {} but brute force {}",
                    self.q, self.n, c, self.is_pp
                ));
            }
        }
        if self.two_to_one != self.is_pp {
            out.push(format!(
                "q={} n={}: two-to-one test {} but brute force {}",
                self.q, self.n, self.two_to_one, self.is_pp
            ));
        }
        out
    }

    pub fn filter(&self, name: &str) -> Option<&FilterOutcome> {
        self.filters.iter().find(|f| f.name == name)
    }
}

fn report_with(field: &OddField, domain: &TwoToOneDomain, n: u64) -> PPReport {
    let values: Vec<FieldElem> = field
        .elements()
        .map(|x| f3_eval_recurrence(field, n, &x))
        .collect();
    let value_sum = values.iter().fold(field.zero(), |acc, v| field.add(&acc, v));
    let is_pp = is_bijection(field, values);
    PPReport {
        p: field.p(),
        e: field.degree(),
        q: field.order(),
        n,
        is_pp,
        filters: vec![
            filter_mod6(field, n),
            filter_even(field, n),
            filter_div3(field, n),
            filter_sum(&value_sum),
        ],
        exact_criterion: exact_criterion_pk(field, n),
        extrapolated_criterion: extrapolated_criterion_pk(field, n),
        two_to_one: domain.test(field, n),
        value_sum,
    }
}

pub fn report(field: &OddField, n: u64) -> Result<PPReport> {
    Ok(report_with(field, &TwoToOneDomain::new(field)?, n))
}

/// One report per `n` in `0..=n_max`, computed in parallel, ordered by `n`.
pub fn scan(field: &OddField, n_max: u64) -> Result<Vec<PPReport>> {
    let domain = TwoToOneDomain::new(field)?;
    Ok((0..=n_max)
        .into_par_iter()
        .map(|n| report_with(field, &domain, n))
        .collect())
}
