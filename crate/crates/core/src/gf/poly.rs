use std::fmt;

use super::{FieldElem, FieldSpec};
use crate::error::{Error, Result};

/// Univariate polynomial over a field, coefficients low-to-high with no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: FieldSpec,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl DensePoly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        DensePoly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Coefficients given as integers, each embedded via `int_scalar`.
    pub fn from_ints(field: &FieldSpec, coeffs: &[i64]) -> Self {
        let p = field.p() as i64;
        let coeffs = coeffs
            .iter()
            .map(|&c| field.int_scalar(c.rem_euclid(p) as u64))
            .collect();
        Self::new(field, coeffs)
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &FieldSpec, c: FieldElem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(field: &FieldSpec, c: FieldElem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Ok(Self::new(f, coeffs))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Self::new(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.field.mul(x, c)).collect();
        Self::new(&self.field, coeffs)
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f));
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(&out[i + j], &f.mul(a, b));
                }
            }
        }
        Ok(Self::new(f, out))
    }

    /// Product truncated to terms of degree `< len`.
    pub fn mul_truncated(&self, other: &Self, len: usize) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        let mut out = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Ok(Self::new(f, out))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::constant(&self.field, self.field.one());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Horner evaluation. `x` must belong to the polynomial's field.
    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Reduces modulo `x^q - x`: every exponent `i >= q` is lowered by
    /// multiples of `q - 1` until it drops below `q`. The constant term is
    /// untouched, so values on GF(q) are preserved.
    pub fn mod_xq_minus_x(&self, q: u64) -> Self {
        let f = &self.field;
        let q = q as usize;
        if self.coeffs.len() <= q {
            return self.clone();
        }
        let mut out: Vec<FieldElem> = self.coeffs[..q].to_vec();
        for (i, c) in self.coeffs.iter().enumerate().skip(q) {
            let j = (i - 1) % (q - 1) + 1;
            out[j] = f.add(&out[j], c);
        }
        Self::new(f, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn product_and_eval() {
        let f7 = FieldSpec::new(7, 1).unwrap();
        let a = DensePoly::from_ints(&f7, &[1, 1]);
        let b = DensePoly::from_ints(&f7, &[1, -1]);
        assert_eq!(a.mul(&b).unwrap(), DensePoly::from_ints(&f7, &[1, 0, -1]));
        let c = DensePoly::from_ints(&f7, &[1, -2]);
        assert_eq!(c.eval(&f7.int_scalar(3)), f7.int_scalar(2));
        assert_eq!(DensePoly::from_ints(&f7, &[0, 0, 0]).degree(), None);
    }

    #[test]
    fn reduction_modulo_xq_minus_x() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let x3 = DensePoly::monomial(&f3, f3.one(), 3);
        assert_eq!(x3.mod_xq_minus_x(3), DensePoly::monomial(&f3, f3.one(), 1));
        let x4 = DensePoly::monomial(&f3, f3.one(), 4);
        assert_eq!(x4.mod_xq_minus_x(3), DensePoly::monomial(&f3, f3.one(), 2));
        let c = DensePoly::from_ints(&f3, &[2]);
        assert_eq!(c.mod_xq_minus_x(3), c);
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = DensePoly::from_ints(&FieldSpec::new(5, 1).unwrap(), &[1, 1]);
        let b = DensePoly::from_ints(&FieldSpec::new(7, 1).unwrap(), &[1, 1]);
        assert_eq!(a.mul(&b).unwrap_err(), Error::FieldMismatch);
        assert_eq!(a.add(&b).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let a = DensePoly::from_ints(&f5, &[2, 0, 1, 3]);
        let mut acc = DensePoly::from_ints(&f5, &[1]);
        for n in 0..8 {
            assert_eq!(a.pow(n), acc);
            acc = acc.mul(&a).unwrap();
        }
    }

    fn field_and_poly() -> impl Strategy<Value = (u64, u32, Vec<u64>)> {
        prop_oneof![Just((3u64, 1u32)), Just((5, 1)), Just((7, 1)), Just((3, 2)), Just((5, 2))]
            .prop_flat_map(|(p, e)| {
                let q = p.pow(e);
                (Just(p), Just(e), prop::collection::vec(0..q, 0..=(2 * q as usize + 1)))
            })
    }

    proptest! {
        #[test]
        fn reduction_preserves_values((p, e, idx) in field_and_poly()) {
            let f = FieldSpec::new(p, e).unwrap();
            let poly = DensePoly::new(&f, idx.iter().map(|&i| f.from_index(i)).collect());
            let reduced = poly.mod_xq_minus_x(f.order());
            prop_assert!(reduced.degree().is_none_or(|d| d < f.order() as usize));
            for x in f.elements() {
                prop_assert_eq!(poly.eval(&x), reduced.eval(&x));
            }
        }

        #[test]
        fn truncated_product_is_a_prefix((p, e, a) in field_and_poly(), len in 0usize..20) {
            let f = FieldSpec::new(p, e).unwrap();
            let a = DensePoly::new(&f, a.iter().map(|&i| f.from_index(i)).collect());
            let b = DensePoly::from_ints(&f, &[1, -1, 2, 0, 1]);
            let full = a.mul(&b).unwrap();
            let trunc = a.mul_truncated(&b, len).unwrap();
            for i in 0..len {
                prop_assert_eq!(trunc.coeff(i), full.coeff(i));
            }
            prop_assert!(trunc.degree().is_none_or(|d| d < len));
        }
    }
}
