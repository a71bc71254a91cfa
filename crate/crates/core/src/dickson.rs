//! Reversed Dickson polynomials `D_{n,k}(a, x)` and the third-kind
//! evaluators.
//!
//! Throughout, `F_n(a, x) = D_{n,2}(a, x)`. Four evaluators of `F_n(1, x)`
//! are provided and are expected to agree everywhere:
//!
//! - [`f3_eval_recurrence`]: `F_n = F_{n-1} - x F_{n-2}`, `F_0 = 0`, `F_1 = 1`.
//! - [`f3_eval_coeff`]: the explicit coefficient form, with `a != 1` handled by
//!   `F_n(a, x) = a^n F_n(1, x / a^2)`.
//! - [`f3_eval_functional`]: writes `x = y(1 - y)` with `y` in GF(q^2) and uses
//!   `F_n(1, x) = (y^n - (1 - y)^n) / (2y - 1)`.
//! - [`jacobsthal_substitution`]: `J_n(-x / 2)`.

use std::ops::Deref;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::{DensePoly, FieldElem, FieldSpec, QuadExt};

struct OddFieldData {
    field: FieldSpec,
    half: FieldElem,
    quarter: FieldElem,
    ext: OnceLock<std::result::Result<Arc<QuadExt>, Error>>,
}

/// A field of odd characteristic. In characteristic 2, `F_n(1, x)` is the
/// reversed Dickson polynomial of the first kind, which this crate does not
/// treat; constructing an `OddField` is where that case is rejected.
#[derive(Clone)]
pub struct OddField(Arc<OddFieldData>);

impl std::fmt::Debug for OddField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.field.fmt(f)
    }
}

impl OddField {
    pub fn new(field: FieldSpec) -> Result<Self> {
        if !field.is_odd() {
            return Err(Error::CharacteristicTwo);
        }
        let half = field.inv(&field.int_scalar(2))?;
        let quarter = field.square(&half);
        Ok(OddField(Arc::new(OddFieldData {
            field,
            half,
            quarter,
            ext: OnceLock::new(),
        })))
    }

    /// Shorthand for `OddField::new(FieldSpec::new(p, e)?)`.
    pub fn make(p: u64, e: u32) -> Result<Self> {
        Self::new(FieldSpec::new(p, e)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.field
    }

    /// 1/2.
    pub fn half(&self) -> &FieldElem {
        &self.0.half
    }

    /// 1/4, the point where the functional parametrisation degenerates.
    pub fn quarter(&self) -> &FieldElem {
        &self.0.quarter
    }

    /// GF(q^2) with its embedding of this field, built on first use.
    pub fn quad_ext(&self) -> Result<Arc<QuadExt>> {
        self.0
            .ext
            .get_or_init(|| QuadExt::new(&self.0.field).map(Arc::new))
            .clone()
    }
}

impl Deref for OddField {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0.field
    }
}

/// Which family `D_{n,k}` belongs to: `k = 0` first kind, `1` second kind,
/// `2` third kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Kind(u32);

impl Kind {
    pub const FIRST: Kind = Kind(0);
    pub const SECOND: Kind = Kind(1);
    pub const THIRD: Kind = Kind(2);

    pub fn new(k: u32) -> Result<Self> {
        if k <= 2 {
            Ok(Kind(k))
        } else {
            Err(Error::UnsupportedKind(k))
        }
    }

    pub fn k(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Kind {
    type Error = Error;

    fn try_from(k: u32) -> Result<Self> {
        Kind::new(k)
    }
}

fn reduce_signed(field: &FieldSpec, c: &BigInt) -> FieldElem {
    let p = BigInt::from(field.p());
    let r = ((c % &p) + &p) % &p;
    field.int_scalar(r.to_u64().expect("residue below p"))
}

/// Integer coefficients of `D_{n,k}(1, x)`, sign of `(-x)^i` included.
///
/// The weight `(n - k i) / (n - i) * C(n - i, i)` is rewritten as
/// `C(n - i, i) - (k - 1) C(n - i - 1, i - 1)` so no division by `n - i`
/// ever happens.
pub fn reversed_dickson_integer_coeffs(n: u64, kind: Kind) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::from(2 - kind.k() as i64)];
    }
    let k_minus_one = BigInt::from(kind.k() as i64 - 1);
    let mut out = Vec::with_capacity(n as usize / 2 + 1);
    // a = C(n - i, i), b = C(n - i - 1, i - 1)
    let mut a = BigUint::one();
    for i in 0..=n / 2 {
        if i > 0 {
            let num = BigUint::from((n - 2 * i + 2) * (n - 2 * i + 1));
            let den = BigUint::from(i) * BigUint::from(n - i + 1);
            a = a * num / den;
        }
        let b = if i == 0 {
            BigUint::zero()
        } else {
            &a * BigUint::from(i) / BigUint::from(n - i)
        };
        let mut c = BigInt::from(a.clone()) - &k_minus_one * BigInt::from(b);
        if i % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    out
}

/// `D_{n,k}(1, x)` as a polynomial over the prime subfield.
pub fn reversed_dickson_coeffs(field: &FieldSpec, n: u64, kind: Kind) -> DensePoly {
    let coeffs = reversed_dickson_integer_coeffs(n, kind)
        .iter()
        .map(|c| reduce_signed(field, c))
        .collect();
    DensePoly::new(field, coeffs)
}

/// `F_0(1, x), ..., F_{n_max}(1, x)` by the linear recurrence.
pub fn f3_values(field: &OddField, n_max: u64, x: &FieldElem) -> Vec<FieldElem> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let (mut prev, mut cur) = (field.zero(), field.one());
    out.push(prev.clone());
    for _ in 0..n_max {
        out.push(cur.clone());
        let next = field.sub(&cur, &field.mul(x, &prev));
        prev = cur;
        cur = next;
    }
    #[cfg(feature = "seeded-fault")]
    if out.len() > 7 {
        out[7] = field.add(&out[7], &field.one());
    }
    out
}

/// `F_n(1, x)` by the linear recurrence, O(n) field operations.
pub fn f3_eval_recurrence(field: &OddField, n: u64, x: &FieldElem) -> FieldElem {
    let (mut prev, mut cur) = (field.zero(), field.one());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = field.sub(&cur, &field.mul(x, &prev));
        prev = cur;
        cur = next;
    }
    #[cfg(feature = "seeded-fault")]
    if n == 7 {
        cur = field.add(&cur, &field.one());
    }
    cur
}

/// `F_n(a, x)` from the explicit coefficients of `F_n(1, .)`.
pub fn f3_eval_coeff(field: &OddField, n: u64, a: &FieldElem, x: &FieldElem) -> FieldElem {
    let poly = reversed_dickson_coeffs(field, n, Kind::THIRD);
    f3_eval_coeff_with(field, &poly, n, a, x)
}

/// As [`f3_eval_coeff`] with `poly = reversed_dickson_coeffs(field, n, THIRD)`
/// supplied by the caller, for bulk evaluation.
pub fn f3_eval_coeff_with(
    field: &OddField,
    poly: &DensePoly,
    n: u64,
    a: &FieldElem,
    x: &FieldElem,
) -> FieldElem {
    if a.is_zero() {
        // F_n(0, x) = 2 E_n(0, x) - D_n(0, x) vanishes identically
        return field.zero();
    }
    let a_sq_inv = field.inv(&field.square(a)).expect("a is nonzero");
    let scaled = field.mul(x, &a_sq_inv);
    field.mul(&field.pow(a, n), &poly.eval(&scaled))
}

/// `n / 2^(n-1)` in the prime subfield, i.e. `F_n(1, 1/4)`.
pub fn quarter_point_value(field: &OddField, n: u64) -> FieldElem {
    if n == 0 {
        return field.zero();
    }
    let exp = (n - 1) % (field.p() - 1);
    field.mul(&field.int_scalar(n), &field.pow(field.half(), exp))
}

/// `(y^n - (1 - y)^n) / (2y - 1)` computed in `f`.
fn functional_ratio(f: &FieldSpec, n: u64, y: &FieldElem) -> FieldElem {
    let one_minus_y = f.sub(&f.one(), y);
    let num = f.sub(&f.pow(y, n), &f.pow(&one_minus_y, n));
    let den = f.sub(&f.add(y, y), &f.one());
    f.div(&num, &den).expect("y differs from 1/2")
}

/// `g(y) = (y^n - (1 - y)^n) / (2y - 1)` for `y != 1/2` in any odd field.
pub fn functional_g(f: &FieldSpec, n: u64, y: &FieldElem) -> FieldElem {
    functional_ratio(f, n, y)
}

/// `F_n(1, x)` through the functional equation.
///
/// Solves `y^2 - y + x = 0` as `y = (1 + s) / 2` with `s^2 = 1 - 4x`, taking
/// `s` in GF(q) when possible and in GF(q^2) otherwise. At `x = 1/4` the
/// value is `n / 2^(n-1)`.
pub fn f3_eval_functional(field: &OddField, n: u64, x: &FieldElem) -> Result<FieldElem> {
    let f = field.spec();
    let disc = f.sub(&f.one(), &f.mul(&f.int_scalar(4), x));
    if disc.is_zero() {
        return Ok(quarter_point_value(field, n));
    }
    if let Some(s) = f.sqrt(&disc) {
        let y = f.mul(&f.add(&f.one(), &s), field.half());
        return Ok(functional_ratio(f, n, &y));
    }
    let qe = field.quad_ext()?;
    let big = qe.ext();
    let s = big
        .sqrt(&qe.embed(&disc))
        .ok_or_else(|| Error::Internal("1 - 4x has no square root in GF(q^2)".into()))?;
    let y = big.mul(&big.add(&big.one(), &s), &qe.embed(field.half()));
    let value = functional_ratio(big, n, &y);
    qe.restrict(&value)
        .ok_or_else(|| Error::Internal(format!("F_{n}(1, {x:?}) left the base field")))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// `f_n(x) = sum_j C(n, 2j+1) x^j`, binomials reduced mod p.
pub fn fn_aux(field: &OddField, n: u64) -> DensePoly {
    let p = BigUint::from(field.p());
    let mut coeffs = Vec::new();
    // running C(n, m)
    let mut c = BigUint::one();
    for m in 1..=n {
        c = c * BigUint::from(n - m + 1) / BigUint::from(m);
        if m % 2 == 1 {
            let r = (&c % &p).to_u64().expect("residue below p");
            coeffs.push(field.int_scalar(r));
        }
    }
    DensePoly::new(field, coeffs)
}

pub fn fn_aux_eval(field: &OddField, n: u64, x: &FieldElem) -> FieldElem {
    fn_aux(field, n).eval(x)
}

/// Right-hand side of `F_{n p^k}(1, x) = F_n(1, x)^(p^k) (1 - 4x)^((p^k - 1) / 2)`.
pub fn frobenius_lift(field: &OddField, n: u64, k: u32, x: &FieldElem) -> FieldElem {
    let pk = field.p().pow(k);
    let base = field.pow(&f3_eval_recurrence(field, n, x), pk);
    let disc = field.sub(&field.one(), &field.mul(&field.int_scalar(4), x));
    field.mul(&base, &field.pow(&disc, (pk - 1) / 2))
}

/// Jacobsthal polynomial `J_n(x)`: `J_0 = 0`, `J_1 = 1`,
/// `J_n = J_{n-1} + 2x J_{n-2}`.
pub fn jacobsthal_eval(field: &OddField, n: u64, x: &FieldElem) -> FieldElem {
    let two_x = field.add(x, x);
    let (mut prev, mut cur) = (field.zero(), field.one());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = field.add(&cur, &field.mul(&two_x, &prev));
        prev = cur;
        cur = next;
    }
    cur
}

/// `J_n(-x / 2)`, which equals `F_n(1, x)`.
pub fn jacobsthal_substitution(field: &OddField, n: u64, x: &FieldElem) -> FieldElem {
    let arg = field.neg(&field.mul(x, field.half()));
    jacobsthal_eval(field, n, &arg)
}
