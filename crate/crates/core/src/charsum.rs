//! `S_n = sum_{a in GF(q)} F_n(1, a)` for `1 <= n <= q^2 - 1`.
//!
//! Two independent routes: direct summation ([`sum_bruteforce`]) and a
//! generating-function argument. For the latter, with `d_n = S_n - n/2^(n-1)`
//! and
//!
//! ```text
//! B(z) = sum_k b_k z^k = z (-1 - (z - z^q)^(q-1))
//! C(z) = (1 + z^(q-1) - z^q) sum_{k=1}^{q^2-1} z^k
//!        - (z^(2(q-1)) + sum_{j=1}^{q-1} (z-1)^(q-1-j) z^(2j) 4^(-j)) B(z)
//! ```
//!
//! the identity `(z^q - z^(q-1) - 1) sum_n d_n z^n = C(z)` holds in `GF(p)[z]`
//! and `d` is read off `C` coefficient by coefficient ([`d_table`]).
//!
//! All of this lives in the prime field: every coefficient involved is an
//! integer reduced mod p.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::dickson::{binomial, f3_eval_recurrence, f3_values, OddField};
use crate::error::{Error, Result};
use crate::gf::{DensePoly, FieldElem, FieldSpec};

fn prime_field_of(field: &OddField) -> FieldSpec {
    FieldSpec::new(field.p(), 1).expect("p is prime and small")
}

fn residue(c: &FieldElem) -> u64 {
    c.prime_residue().expect("prime field element")
}

/// `sum_{a in GF(q)} F_n(1, a)` by direct evaluation. The result is checked
/// to lie in the prime subfield.
pub fn sum_bruteforce(field: &OddField, n: u64) -> Result<FieldElem> {
    let total = field
        .elements()
        .fold(field.zero(), |acc, a| field.add(&acc, &f3_eval_recurrence(field, n, &a)));
    if total.prime_residue().is_none() {
        return Err(Error::Internal(format!(
            "sum of F_{n}(1, a) = {total:?} is outside the prime field"
        )));
    }
    Ok(total)
}

/// Brute-force sums for every `n` in `1..=n_max`, one recurrence pass per
/// point. Entry `i` holds the sum for `n = i + 1`.
pub fn sums_bruteforce(field: &OddField, n_max: u64) -> Result<Vec<FieldElem>> {
    let mut totals = vec![field.zero(); n_max as usize + 1];
    for a in field.elements() {
        for (t, v) in totals.iter_mut().zip(f3_values(field, n_max, &a)) {
            *t = field.add(t, &v);
        }
    }
    totals.remove(0);
    if let Some((i, bad)) = totals
        .iter()
        .enumerate()
        .find(|(_, t)| t.prime_residue().is_none())
    {
        return Err(Error::Internal(format!(
            "sum of F_{}(1, a) = {bad:?} is outside the prime field",
            i + 1
        )));
    }
    Ok(totals)
}

/// `z (-1 - (z - z^q)^(q-1))` over GF(p).
pub fn b_polynomial(field: &OddField) -> DensePoly {
    let fp = prime_field_of(field);
    let q = field.order() as usize;
    let z_minus_zq = DensePoly::monomial(&fp, fp.one(), 1)
        .sub(&DensePoly::monomial(&fp, fp.one(), q))
        .expect("same field");
    let inner = DensePoly::constant(&fp, fp.one())
        .add(&z_minus_zq.pow(q as u64 - 1))
        .expect("same field")
        .neg();
    inner
        .mul(&DensePoly::monomial(&fp, fp.one(), 1))
        .expect("same field")
}

/// Closed form for `b_k`, writing `k = alpha + beta q` with digits below q:
/// `(-1)^(beta+1) C(q-1, beta)` when `alpha + beta = q`, `-1` when
/// `alpha + beta = 1`, zero otherwise.
pub fn b_closed_form(field: &OddField, k: u64) -> FieldElem {
    let fp = prime_field_of(field);
    let q = field.order();
    let (alpha, beta) = (k % q, k / q);
    if beta >= q {
        return fp.zero();
    }
    if alpha + beta == q {
        let c = binomial(q - 1, beta) % num_bigint::BigUint::from(field.p());
        let c = fp.int_scalar(c.iter_u64_digits().next().unwrap_or(0));
        if beta % 2 == 1 {
            c
        } else {
            fp.neg(&c)
        }
    } else if alpha + beta == 1 {
        fp.neg(&fp.one())
    } else {
        fp.zero()
    }
}

/// `b_1 ..= b_{q^2-q+1}`, index 0 unused. Computed both by expansion and by
/// the closed form; disagreement is an error.
pub fn b_coeffs(field: &OddField) -> Result<Vec<FieldElem>> {
    let q = field.order();
    let top = q * q - q + 1;
    let expanded = b_polynomial(field);
    if expanded.degree() != Some(top as usize) {
        return Err(Error::Internal(format!(
            "B(z) has degree {:?}, expected {top}",
            expanded.degree()
        )));
    }
    (0..=top)
        .map(|k| {
            let e = expanded.coeff(k as usize);
            if k > 0 && e != b_closed_form(field, k) {
                Err(Error::Internal(format!("b_{k}: expansion and closed form differ")))
            } else {
                Ok(e)
            }
        })
        .collect()
}

/// The right-hand side `C(z)` as a polynomial over GF(p).
pub fn c_polynomial(field: &OddField) -> Result<DensePoly> {
    let fp = prime_field_of(field);
    let q = field.order() as usize;
    let one = fp.one();
    let mono = |k: usize| DensePoly::monomial(&fp, one.clone(), k);

    let ones = DensePoly::new(&fp, (0..q * q).map(|k| if k == 0 { fp.zero() } else { one.clone() }).collect());
    let first = DensePoly::constant(&fp, one.clone())
        .add(&mono(q - 1))?
        .sub(&mono(q))?
        .mul(&ones)?;

    let quarter = fp.inv(&fp.int_scalar(4))?;
    let z_minus_one = DensePoly::from_ints(&fp, &[-1, 1]);
    let mut weight = mono(2 * (q - 1));
    for j in 1..q {
        let term = z_minus_one
            .pow((q - 1 - j) as u64)
            .mul(&DensePoly::monomial(&fp, fp.pow(&quarter, j as u64), 2 * j))?;
        weight = weight.add(&term)?;
    }
    let c = first.sub(&weight.mul(&b_polynomial(field))?)?;

    if !c.coeff(0).is_zero() {
        return Err(Error::Internal("C(z) has a nonzero constant term".into()));
    }
    let bound = q * q + q - 1;
    if c.degree().is_some_and(|d| d > bound) {
        return Err(Error::Internal(format!(
            "C(z) has degree {:?}, above {bound}",
            c.degree()
        )));
    }
    Ok(c)
}

/// `c_0 ..= c_{q^2+q-1}` (`c_0 = 0`).
pub fn c_coeffs(field: &OddField) -> Result<Vec<FieldElem>> {
    let c = c_polynomial(field)?;
    let q = field.order() as usize;
    Ok((0..q * q + q).map(|k| c.coeff(k)).collect())
}

/// Solves `(z^q - z^(q-1) - 1) D(z) = C(z)` for `d_1 ..= d_{q^2-1}`
/// (index 0 unused).
///
/// The clauses are applied in order: `d_j = -c_j` for `j < q`;
/// `d_q = c_1 - c_q`; row by row for `1 <= l <= q-2`,
/// `d_{lq} = d_{(l-1)q} - d_{(l-1)q+1} - c_{lq}` (from `l = 2`) and
/// `d_{lq+j} = d_{(l-1)q+j} - d_{(l-1)q+j+1} - c_{lq+j}`; finally the last
/// `q` values come from `d_{q^2-q+j} = sum_{i=j}^{q-1} c_{q^2+i}`.
///
/// The system is overdetermined: the row recursion continued to `l = q-1`
/// must reproduce the tail, and the full product must give back `C`.
pub fn d_table(field: &OddField, c: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let fp = prime_field_of(field);
    let q = field.order() as usize;
    if c.len() != q * q + q {
        return Err(Error::Internal(format!(
            "expected c_0..=c_{}, got {} entries",
            q * q + q - 1,
            c.len()
        )));
    }
    let step = |d: &[FieldElem], i: usize| {
        // d_i = d_{i-q} - d_{i-q+1} - c_i, with d_0 = 0
        fp.sub(&fp.sub(&d[i - q], &d[i - q + 1]), &c[i])
    };
    let mut d = vec![fp.zero(); q * q];
    for j in 1..q {
        d[j] = fp.neg(&c[j]);
    }
    d[q] = fp.sub(&c[1], &c[q]);
    for l in 1..=q - 2 {
        if l >= 2 {
            d[l * q] = step(&d, l * q);
        }
        for j in 1..q {
            d[l * q + j] = step(&d, l * q + j);
        }
    }
    // row l = q-1 by recursion, to compare against the closed tail
    let mut running = d.clone();
    for i in (q - 1) * q..q * q {
        running[i] = step(&running, i);
    }
    for j in 0..q {
        let idx = q * q - q + j;
        let tail = (j..q).fold(fp.zero(), |acc, i| fp.add(&acc, &c[q * q + i]));
        if tail != running[idx] {
            return Err(Error::InconsistentRecursion { index: idx as u64 });
        }
        d[idx] = tail;
    }

    let lhs = DensePoly::new(&fp, d.clone()).mul(&DensePoly::from_ints(
        &fp,
        &{
            let mut m = vec![0i64; q + 1];
            m[0] = -1;
            m[q - 1] = -1;
            m[q] = 1;
            m
        },
    ))?;
    if let Some(i) = (0..c.len().max(lhs.coeffs().len())).find(|&i| lhs.coeff(i) != c.get(i).cloned().unwrap_or_else(|| fp.zero())) {
        return Err(Error::InconsistentRecursion { index: i as u64 });
    }
    Ok(d)
}

/// `b`, `c`, `d` and `f = d + n/2^(n-1)` for one field, all over GF(p).
#[derive(Debug, Clone)]
pub struct SumTable {
    q: u64,
    prime: FieldSpec,
    b: Vec<FieldElem>,
    c: Vec<FieldElem>,
    d: Vec<FieldElem>,
    f: Vec<FieldElem>,
}

impl SumTable {
    pub fn build(field: &OddField) -> Result<Self> {
        let prime = prime_field_of(field);
        let b = b_coeffs(field)?;
        let c = c_coeffs(field)?;
        let d = d_table(field, &c)?;
        let half = prime.inv(&prime.int_scalar(2))?;
        let p = field.p();
        let f = d
            .iter()
            .enumerate()
            .map(|(n, dn)| {
                if n == 0 {
                    return prime.zero();
                }
                let n = n as u64;
                let corr = prime.mul(&prime.int_scalar(n), &prime.pow(&half, (n - 1) % (p - 1)));
                prime.add(dn, &corr)
            })
            .collect();
        Ok(SumTable {
            q: field.order(),
            prime,
            b,
            c,
            d,
            f,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn prime_field(&self) -> &FieldSpec {
        &self.prime
    }

    /// `b_1 ..= b_{q^2-q+1}` at indices 1.., index 0 unused.
    pub fn b(&self) -> &[FieldElem] {
        &self.b
    }

    /// `c_1 ..= c_{q^2+q-1}` at indices 1.., index 0 unused.
    pub fn c(&self) -> &[FieldElem] {
        &self.c
    }

    /// `d_1 ..= d_{q^2-1}` at indices 1.., index 0 unused.
    pub fn d(&self) -> &[FieldElem] {
        &self.d
    }

    /// `f_1 ..= f_{q^2-1}` at indices 1.., index 0 unused.
    pub fn f(&self) -> &[FieldElem] {
        &self.f
    }

    pub fn sum(&self, n: u64) -> Result<&FieldElem> {
        let hi = self.q * self.q - 1;
        if n == 0 || n > hi {
            return Err(Error::IndexOutOfRange { index: n, lo: 1, hi });
        }
        Ok(&self.f[n as usize])
    }
}

type TableCache = Mutex<HashMap<(u64, u32), Arc<SumTable>>>;

/// Built once per field and shared afterwards.
pub fn sum_table(field: &OddField) -> Result<Arc<SumTable>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (field.p(), field.degree());
    if let Some(t) = cache.lock().expect("cache lock").get(&key) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(SumTable::build(field)?);
    cache
        .lock()
        .expect("cache lock")
        .entry(key)
        .or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

/// `d_n + n/2^(n-1)` from the cached table, as an element of GF(q).
pub fn sum_via_recursion(field: &OddField, n: u64) -> Result<FieldElem> {
    let table = sum_table(field)?;
    let v = table.sum(n)?;
    Ok(field.int_scalar(residue(v)))
}

/// The sums as the closed statements print them: each `S_n` in terms of
/// earlier `S` values plus an explicit power-of-two correction, rather than
/// via `d`. Entry `n` for `1 <= n <= q^2 - 1`.
pub fn printed_clause_sums(field: &OddField, table: &SumTable) -> Vec<FieldElem> {
    let fp = &table.prime;
    let q = field.order() as usize;
    let p = field.p();
    let c = &table.c;
    let half = fp.inv(&fp.int_scalar(2)).expect("p odd");
    // 1 / 2^k
    let inv_pow2 = |k: u64| fp.pow(&half, k % (p - 1));
    let int = |v: i64| fp.int_scalar(v.rem_euclid(p as i64) as u64);

    let mut s = vec![fp.zero(); q * q];
    for j in 1..q {
        s[j] = fp.add(&fp.neg(&c[j]), &fp.mul(&int(j as i64), &inv_pow2(j as u64 - 1)));
    }
    s[q] = fp.sub(&c[1], &c[q]);
    let two_q = fp.pow(&fp.int_scalar(2), q as u64);
    for l in 1..=q - 2 {
        if l >= 2 {
            let base = fp.sub(&fp.sub(&s[(l - 1) * q], &s[(l - 1) * q + 1]), &c[l * q]);
            s[l * q] = fp.add(&base, &inv_pow2(((l - 1) * q) as u64));
        }
        for j in 1..q {
            let i = l * q + j;
            let base = fp.sub(&fp.sub(&s[i - q], &s[i - q + 1]), &c[i]);
            let num = fp.add(
                &fp.mul(&two_q, &int(1 - j as i64)),
                &int(2 * j as i64),
            );
            s[i] = fp.add(&base, &fp.mul(&num, &inv_pow2(i as u64)));
        }
    }
    for j in 0..q {
        let i = q * q - q + j;
        let tail = (j..q).fold(fp.zero(), |acc, k| fp.add(&acc, &c[q * q + k]));
        let corr = if j == 0 {
            fp.zero()
        } else {
            fp.mul(&int(j as i64), &inv_pow2(i as u64 - 1))
        };
        s[i] = fp.add(&tail, &corr);
    }
    s
}

/// Cross-multiplied form of the two expressions for `h(z)`:
/// `B(z) (z - 1) ((z-1)^(q-1) - z^(2(q-1))) = z (z^(q^2-1) - 1) (z^q - z^(q-1) - 1)`.
pub fn h_identity_holds(field: &OddField) -> bool {
    let fp = prime_field_of(field);
    let q = field.order() as usize;
    let mono = |k: usize| DensePoly::monomial(&fp, fp.one(), k);
    let z_minus_one = DensePoly::from_ints(&fp, &[-1, 1]);
    let lhs = b_polynomial(field)
        .mul(&z_minus_one)
        .and_then(|t| t.mul(&z_minus_one.pow(q as u64 - 1).sub(&mono(2 * (q - 1)))?));
    let rhs = mono(q * q)
        .sub(&mono(1))
        .and_then(|t| t.mul(&mono(q).sub(&mono(q - 1))?.sub(&mono(0))?));
    matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
}

/// `(1 - z + x z^2) sum_{n=0}^{N} F_n(1, x) z^n = z + O(z^(N+1))`.
pub fn generating_function_holds(field: &OddField, x: &FieldElem, n_max: u64) -> bool {
    let series = DensePoly::new(field, f3_values(field, n_max, x));
    let denom = DensePoly::new(
        field,
        vec![field.one(), field.neg(&field.one()), x.clone()],
    );
    match denom.mul_truncated(&series, n_max as usize + 1) {
        Ok(prod) => prod == DensePoly::monomial(field, field.one(), 1),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcheck::is_permutation;

    fn odd(p: u64, e: u32) -> OddField {
        OddField::make(p, e).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let f3 = odd(3, 1);
        assert!(sum_bruteforce(&f3, 1).unwrap().is_zero());
        assert_eq!(sum_bruteforce(&f3, 5).unwrap(), f3.int_scalar(2));
        assert!(sum_bruteforce(&f3, 3).unwrap().is_zero());
        let batch = sums_bruteforce(&f3, 8).unwrap();
        for n in 1..=8 {
            assert_eq!(batch[n as usize - 1], sum_bruteforce(&f3, n).unwrap());
        }
    }

    #[test]
    fn b_values() {
        let f3 = odd(3, 1);
        let b = b_coeffs(&f3).unwrap();
        let fp = FieldSpec::new(3, 1).unwrap();
        let minus_one = fp.neg(&fp.one());
        assert_eq!(b[1], minus_one);
        assert_eq!(b[3], minus_one);
        // alpha + beta = 3 at k = 5, 7, 9: (-1)^(beta+1) C(2, beta)
        assert_eq!(b[5], fp.int_scalar(2)); // beta = 1: +2
        assert_eq!(b[7], fp.neg(&fp.int_scalar(1))); // beta = 2: -1
        assert_eq!(b.len(), 8);
        for f in [odd(5, 1), odd(7, 1), odd(3, 2), odd(13, 1)] {
            let b = b_coeffs(&f).unwrap();
            let q = f.order() as usize;
            assert_eq!(b[1], b[q]);
        }
    }

    #[test]
    fn c_and_d_shapes() {
        let f3 = odd(3, 1);
        let c = c_coeffs(&f3).unwrap();
        assert!(c[0].is_zero());
        assert_eq!(c.len(), 12);
        assert_eq!(c_polynomial(&f3).unwrap().coeff(1), c[1]);
        let d = d_table(&f3, &c).unwrap();
        let fp = FieldSpec::new(3, 1).unwrap();
        assert_eq!(d[1], fp.neg(&c[1]));
        assert_eq!(d[8], c[11]);
        assert!(d[5].is_zero());
    }

    #[test]
    fn d_table_detects_a_corrupted_c() {
        let f5 = odd(5, 1);
        let mut c = c_coeffs(&f5).unwrap();
        let fp = FieldSpec::new(5, 1).unwrap();
        let last = c.len() - 1;
        c[last] = fp.add(&c[last], &fp.one());
        assert!(matches!(
            d_table(&f5, &c),
            Err(Error::InconsistentRecursion { .. })
        ));
    }

    #[test]
    fn recursion_examples() {
        let f3 = odd(3, 1);
        assert_eq!(sum_via_recursion(&f3, 5).unwrap(), f3.int_scalar(2));
        assert!(sum_via_recursion(&f3, 1).unwrap().is_zero());
        let f5 = odd(5, 1);
        assert_eq!(sum_via_recursion(&f5, 5).unwrap(), sum_bruteforce(&f5, 5).unwrap());
        assert!(matches!(
            sum_via_recursion(&f3, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            sum_via_recursion(&f3, 9),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn recursion_matches_brute_force() {
        for f in [odd(3, 1), odd(5, 1), odd(7, 1), odd(3, 2)] {
            let q = f.order();
            let brute = sums_bruteforce(&f, q * q - 1).unwrap();
            let table = sum_table(&f).unwrap();
            for n in 1..q * q {
                let rec = table.sum(n).unwrap();
                assert_eq!(
                    brute[n as usize - 1].prime_residue(),
                    rec.prime_residue(),
                    "q={q} n={n}"
                );
            }
            assert_eq!(printed_clause_sums(&f, &table)[1..], table.f()[1..]);
        }
    }

    #[test]
    fn identities() {
        for f in [odd(3, 1), odd(5, 1), odd(7, 1), odd(3, 2)] {
            assert!(h_identity_holds(&f));
        }
        for f in [odd(3, 1), odd(5, 1), odd(7, 1)] {
            let n = 2 * f.order() * f.order();
            for x in f.elements() {
                assert!(generating_function_holds(&f, &x, n));
            }
        }
    }

    #[test]
    fn permutations_sum_to_zero() {
        for f in [odd(3, 1), odd(5, 1), odd(7, 1), odd(3, 2)] {
            let q = f.order();
            let sums = sums_bruteforce(&f, q * q - 1).unwrap();
            for n in 1..q * q {
                if is_permutation(&f, n) {
                    assert!(sums[n as usize - 1].is_zero(), "q={q} n={n}");
                }
            }
        }
    }
}
