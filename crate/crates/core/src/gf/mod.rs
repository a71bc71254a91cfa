//! Exact arithmetic in GF(p^e), realised as GF(p)[t]/(m) with a
//! deterministically chosen modulus `m`.
//!
//! Elements are coefficient vectors over the prime field in the polynomial
//! basis `1, t, ..., t^(e-1)`. The base-`p` integer `sum c_i p^i` is the
//! element's *index*; it fixes the enumeration order, the canonical square
//! root and the `Ord` impl on [`FieldElem`].

mod ext;
mod irreducible;
mod poly;

pub use ext::QuadExt;
pub use poly::DensePoly;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const MAX_ORDER: u64 = 1 << 16;

/// Quadratic extensions of fields up to [`MAX_ORDER`] may reach this order.
const MAX_EXT_ORDER: u64 = MAX_ORDER * MAX_ORDER;

type Coeffs = SmallVec<[u32; 8]>;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn inv_mod_prime(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    if r1 == 0 {
        return None;
    }
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (s0, s1) = (s1, s0 - quot * s1);
    }
    Some(s0.rem_euclid(p as i64) as u64)
}

/// An element of some GF(p^e). Carries no reference to its field; every
/// operation goes through the [`FieldSpec`] it was created by.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Coeffs,
}

impl FieldElem {
    /// Coefficients over GF(p), low-to-high.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeffs_u64(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c as u64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The residue if the element lies in the prime subfield.
    pub fn prime_residue(&self) -> Option<u64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0] as u64)
        } else {
            None
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            f.debug_list().entries(self.coeffs.iter()).finish()
        }
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct FieldData {
    p: u64,
    e: u32,
    order: u64,
    /// e + 1 coefficients, monic.
    modulus: Vec<u64>,
    /// Smallest non-square, used by Tonelli-Shanks. `None` in characteristic 2.
    nonresidue: Option<FieldElem>,
}

/// Description of GF(p^e). Cheap to clone; clones share the same data.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.e, self.0.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// GF(p^e) with the smallest monic irreducible modulus of degree `e`.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_limit(p, e, MAX_ORDER)
    }

    pub(crate) fn with_limit(p: u64, e: u32, max: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = p
            .checked_pow(e)
            .filter(|&q| q <= max)
            .ok_or(Error::OrderTooLarge { p, e, max })?;
        let modulus = irreducible::smallest_irreducible(p, e);
        let mut data = FieldData {
            p,
            e,
            order,
            modulus,
            nonresidue: None,
        };
        if p != 2 {
            let probe = FieldSpec(Arc::new(FieldData {
                nonresidue: None,
                modulus: data.modulus.clone(),
                ..data
            }));
            data.nonresidue = Some(probe.find_nonresidue());
        }
        Ok(FieldSpec(Arc::new(data)))
    }

    pub(crate) fn new_extension_of(p: u64, e: u32) -> Result<Self> {
        Self::with_limit(p, e, MAX_EXT_ORDER)
    }

    fn find_nonresidue(&self) -> FieldElem {
        let half = (self.order() - 1) / 2;
        let minus_one = self.neg(&self.one());
        (2..self.order())
            .map(|i| self.from_index(i))
            .find(|z| self.pow(z, half) == minus_one)
            .expect("odd field has non-squares")
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    /// q = p^e.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.0.p != 2
    }

    fn e(&self) -> usize {
        self.0.e as usize
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: SmallVec::from_elem(0, self.e()),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.int_scalar(1)
    }

    /// `n mod p` as a constant.
    pub fn int_scalar(&self, n: u64) -> FieldElem {
        let mut z = self.zero();
        z.coeffs[0] = (n % self.0.p) as u32;
        z
    }

    /// Builds an element from at most `e` coefficients, reducing each mod p.
    pub fn elem(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.e() {
            return Err(Error::InvalidElement(coeffs.to_vec()));
        }
        let mut z = self.zero();
        for (slot, &c) in z.coeffs.iter_mut().zip(coeffs) {
            *slot = (c % self.0.p) as u32;
        }
        Ok(z)
    }

    /// True if `x` has the right length and every residue lies in `[0, p)`.
    pub fn contains(&self, x: &FieldElem) -> bool {
        x.coeffs.len() == self.e() && x.coeffs.iter().all(|&c| (c as u64) < self.0.p)
    }

    pub fn index(&self, x: &FieldElem) -> u64 {
        x.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.0.p + c as u64)
    }

    pub fn from_index(&self, mut idx: u64) -> FieldElem {
        let mut z = self.zero();
        for slot in z.coeffs.iter_mut() {
            *slot = (idx % self.0.p) as u32;
            idx /= self.0.p;
        }
        z
    }

    /// All q elements in ascending index order.
    pub fn enumerate(&self) -> Vec<FieldElem> {
        self.elements().collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.0.p as u32;
        FieldElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.0.p as u32;
        FieldElem {
            coeffs: a
                .coeffs
                .iter()
                .map(|&x| if x == 0 { 0 } else { p - x })
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.0.p;
        let e = self.e();
        if e == 1 {
            let mut z = self.zero();
            z.coeffs[0] = (a.coeffs[0] as u64 * b.coeffs[0] as u64 % p) as u32;
            return z;
        }
        let mut prod: SmallVec<[u64; 16]> = SmallVec::from_elem(0, 2 * e - 1);
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x as u64 * y as u64;
            }
            // keep the accumulators well clear of overflow for large p
            if p > 1 << 12 {
                for c in prod.iter_mut() {
                    *c %= p;
                }
            }
        }
        let m = &self.0.modulus;
        for top in (e..2 * e - 1).rev() {
            let c = prod[top] % p;
            if c != 0 {
                let shift = top - e;
                for j in 0..e {
                    prod[shift + j] = (prod[shift + j] + c * (p - m[j])) % p;
                }
            }
        }
        FieldElem {
            coeffs: prod[..e].iter().map(|&c| (c % p) as u32).collect(),
        }
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: &FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if self.e() == 1 {
            let r = inv_mod_prime(a.coeffs[0] as u64, self.0.p).ok_or(Error::ZeroInverse)?;
            return Ok(self.int_scalar(r));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// x -> x^q is the identity; x -> x^p generates the Galois group.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.0.p)
    }

    pub fn is_square(&self, x: &FieldElem) -> bool {
        if x.is_zero() || !self.is_odd() {
            return true;
        }
        self.pow(x, (self.order() - 1) / 2) == self.one()
    }

    /// Canonical square root: of the two roots, the one with the smaller
    /// index. `None` if `x` is not a square.
    pub fn sqrt(&self, x: &FieldElem) -> Option<FieldElem> {
        if x.is_zero() {
            return Some(self.zero());
        }
        let root = if self.is_odd() {
            self.tonelli_shanks(x)?
        } else {
            // squaring is a bijection in characteristic 2
            self.pow(x, self.order() / 2)
        };
        let other = self.neg(&root);
        Some(root.min(other))
    }

    fn tonelli_shanks(&self, x: &FieldElem) -> Option<FieldElem> {
        if !self.is_square(x) {
            return None;
        }
        let q = self.order();
        let mut s = 0u32;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self.0.nonresidue.as_ref().expect("odd field");
        let one = self.one();
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut r = self.pow(x, (t + 1) / 2);
        let mut u = self.pow(x, t);
        while u != one {
            // least i with u^(2^i) = 1
            let mut i = 0;
            let mut probe = u.clone();
            while probe != one {
                probe = self.square(&probe);
                i += 1;
            }
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            r = self.mul(&r, &b);
            u = self.mul(&u, &c);
        }
        Some(r)
    }
}
