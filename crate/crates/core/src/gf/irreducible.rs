//! Deterministic modulus selection over a prime field.
//!
//! Polynomials here are plain `u64` residue vectors, low-to-high, with no
//! trailing zeros. They only exist to pick a field modulus, so the routines
//! are schoolbook and make no attempt at speed.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    super::inv_mod_prime(a, p).expect("nonzero residue")
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
fn rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = a[top] * lead_inv % p;
        if c != 0 {
            let shift = top - dm;
            for (j, &mj) in m.iter().enumerate() {
                a[shift + j] = (a[shift + j] + (p - c) * mj % p) % p;
            }
        }
        a.pop();
        a = trim(a);
    }
    trim(a)
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(trim(out), m, p)
}

fn pow_rem(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(vec![1], m, p);
    let mut b = rem(base.to_vec(), m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, m, p);
        }
        b = mul_rem(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: `f` of degree `d` is irreducible iff
/// `gcd(x^(p^i) - x, f) = 1` for every `1 <= i <= d/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let d = match f.len() {
        0 | 1 => return false,
        n => n - 1,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = rem(x.clone(), &f, p);
    for _ in 0..d / 2 {
        h = pow_rem(&h, p, &f, p);
        // h - x
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(f.clone(), trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `e` whose low coefficients, read as a
/// base-`p` integer with the constant term least significant, are smallest.
/// Returns `e + 1` coefficients, low-to-high.
pub(crate) fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let mut candidate = vec![0u64; e + 1];
    candidate[e] = 1;
    loop {
        if is_irreducible(&candidate, p) {
            return candidate;
        }
        // next base-p counter value over the low e digits
        let mut i = 0;
        loop {
            assert!(i < e, "an irreducible of every degree exists");
            candidate[i] += 1;
            if candidate[i] == p {
                candidate[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive factor search: no monic factor of degree 1..=d/2 divides f.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        for deg in 1..=d / 2 {
            let count = p.pow(deg as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(deg + 1);
                let mut v = idx;
                for _ in 0..deg {
                    g.push(v % p);
                    v /= p;
                }
                g.push(1);
                if rem(f.to_vec(), &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_agrees_with_trial_division() {
        for &(p, d) in &[(2u64, 4usize), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut f = Vec::new();
                let mut v = idx;
                for _ in 0..d {
                    f.push(v % p);
                    v /= p;
                }
                f.push(1);
                assert_eq!(
                    is_irreducible(&f, p),
                    irreducible_by_trial_division(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn smallest_moduli() {
        assert_eq!(smallest_irreducible(7, 1), vec![0, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(5, 2), vec![2, 0, 1]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
    }
}
