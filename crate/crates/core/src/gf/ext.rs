use std::collections::HashMap;

use super::{FieldElem, FieldSpec};
use crate::error::{Error, Result};

/// GF(q^2) together with a fixed embedding of GF(q).
///
/// The extension uses the same modulus rule as [`FieldSpec::new`] with
/// degree `2e`. The embedding sends the base generator `t` to the
/// smallest-index root of the base modulus inside the extension.
#[derive(Debug, Clone)]
pub struct QuadExt {
    base: FieldSpec,
    ext: FieldSpec,
    /// Images of `1, t, ..., t^(e-1)`.
    basis: Vec<FieldElem>,
    back: HashMap<FieldElem, FieldElem>,
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive_element(f: &FieldSpec) -> FieldElem {
    let order = f.order() - 1;
    let factors = distinct_prime_factors(order);
    let one = f.one();
    (1..f.order())
        .map(|i| f.from_index(i))
        .find(|g| factors.iter().all(|r| f.pow(g, order / r) != one))
        .expect("multiplicative group is cyclic")
}

impl QuadExt {
    pub fn new(base: &FieldSpec) -> Result<Self> {
        if !base.is_odd() {
            return Err(Error::CharacteristicTwo);
        }
        let e = base.degree();
        let ext = FieldSpec::new_extension_of(base.p(), 2 * e)?;
        let root = if e == 1 {
            // base modulus is x, and its root 0 only serves to fix t^0 = 1
            ext.zero()
        } else {
            let g = primitive_element(&ext);
            // generates the multiplicative group of the copy of GF(q)
            let w = ext.pow(&g, base.order() + 1);
            let modulus = base.modulus();
            let eval_modulus = |r: &FieldElem| {
                modulus.iter().rev().fold(ext.zero(), |acc, &c| {
                    ext.add(&ext.mul(&acc, r), &ext.int_scalar(c))
                })
            };
            let mut candidate = ext.one();
            let mut best: Option<FieldElem> = None;
            for _ in 0..base.order() - 1 {
                if eval_modulus(&candidate).is_zero() && best.as_ref().is_none_or(|b| candidate < *b)
                {
                    best = Some(candidate.clone());
                }
                candidate = ext.mul(&candidate, &w);
            }
            best.ok_or_else(|| Error::Internal("base modulus has no root in GF(q^2)".into()))?
        };
        let mut basis = Vec::with_capacity(e as usize);
        let mut power = ext.one();
        for _ in 0..e {
            basis.push(power.clone());
            power = ext.mul(&power, &root);
        }
        let mut out = QuadExt {
            base: base.clone(),
            ext,
            basis,
            back: HashMap::new(),
        };
        out.back = base
            .elements()
            .map(|x| (out.embed(&x), x))
            .collect();
        Ok(out)
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        &self.ext
    }

    pub fn embed(&self, x: &FieldElem) -> FieldElem {
        x.coeffs()
            .iter()
            .zip(&self.basis)
            .fold(self.ext.zero(), |acc, (&c, b)| {
                self.ext
                    .add(&acc, &self.ext.mul(&self.ext.int_scalar(c as u64), b))
            })
    }

    /// Inverse of [`embed`](Self::embed); `None` outside the embedded copy.
    pub fn restrict(&self, y: &FieldElem) -> Option<FieldElem> {
        self.back.get(y).cloned()
    }

    /// Membership in the embedded GF(q), tested as `y^q = y`.
    pub fn in_base(&self, y: &FieldElem) -> bool {
        self.ext.pow(y, self.base.order()) == *y
    }
}
