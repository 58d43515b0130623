//! Exact arithmetic in F_{p^nu}.
//!
//! A [`FieldParams`] fixes the prime p, the extension degree nu, and (for
//! nu > 1) a monic irreducible modulus over F_p. Elements are coordinate
//! vectors in the power basis of the modulus. Everything is validated at
//! construction: p must be prime and the modulus irreducible.
//!
//! Besides the [`FieldElem`] wrapper, the params expose slice-level
//! primitives (`add_slices`, `mul_slices`, ...) so that dense matrix code
//! can work on flat coordinate buffers without per-entry allocation.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Largest supported extension degree. Towers in this crate live over
/// small fields; 8 leaves plenty of room.
pub const MAX_NU: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldParams {
    p: u64,
    nu: usize,
    /// Monic modulus coefficients c_0..c_nu over F_p; empty when nu == 1.
    modulus: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- dense univariate arithmetic over F_p, used for modulus validation ---

fn fp_poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    fp_poly_trim(&mut out);
    out
}

fn fp_poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    fp_poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        if c != 0 {
            #[allow(clippy::needless_range_loop)]
            for i in 0..=dm {
                let idx = dr - dm + i;
                r[idx] = (r[idx] + p - (c * m[i]) % p) % p;
            }
        }
        fp_poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_poly_trim(&mut a);
    fp_poly_trim(&mut b);
    while !b.is_empty() {
        let r = fp_poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on integers
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "non-invertible residue");
    ((t % p as i64 + p as i64) % p as i64) as u64
}

/// x^(p^k) mod m, computed by k successive p-th powers.
fn fp_poly_x_frob(k: usize, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![0, 1]; // x
    for _ in 0..k {
        r = fp_poly_powmod(&r, p, m, p);
    }
    r
}

fn fp_poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = fp_poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = fp_poly_rem(&fp_poly_mul(&result, &b, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            b = fp_poly_rem(&fp_poly_mul(&b, &b, p), m, p);
        }
    }
    result
}

fn fp_poly_is_irreducible(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // x^(p^n) == x mod m
    let xq = fp_poly_x_frob(n, m, p);
    let mut x = vec![0u64, 1];
    fp_poly_trim(&mut x);
    if fp_poly_rem(&xq, m, p) != x {
        return false;
    }
    // gcd(x^(p^(n/q)) - x, m) == 1 for every prime q | n
    let mut k = n;
    let mut primes = vec![];
    let mut q = 2;
    while q * q <= k {
        if k.is_multiple_of(q) {
            primes.push(q);
            while k.is_multiple_of(q) {
                k /= q;
            }
        }
        q += 1;
    }
    if k > 1 {
        primes.push(k);
    }
    for q in primes {
        let mut h = fp_poly_x_frob(n / q, m, p);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        fp_poly_trim(&mut h);
        let g = fp_poly_gcd(&h, m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldParams {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        Ok(Arc::new(FieldParams {
            p,
            nu: 1,
            modulus: vec![],
        }))
    }

    /// F_{p^nu} presented as F_p[u]/(modulus), modulus monic of degree nu.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        let nu = modulus.len().saturating_sub(1);
        if nu < 2 {
            return Err(Error::InvalidParams(
                "extension modulus must have degree >= 2".into(),
            ));
        }
        if nu > MAX_NU {
            return Err(Error::InvalidParams(format!(
                "extension degree {nu} exceeds supported maximum {MAX_NU}"
            )));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidParams("modulus must be monic".into()));
        }
        if !fp_poly_is_irreducible(&modulus, p) {
            return Err(Error::InvalidParams("modulus is reducible over F_p".into()));
        }
        Ok(Arc::new(FieldParams { p, nu, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field cardinality p^nu.
    pub fn order(&self) -> u64 {
        self.p.pow(self.nu as u32)
    }

    // ----- slice primitives: all slices have length nu -----

    pub fn add_slices(&self, a: &mut [u64], b: &[u64]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = (*x + *y) % self.p;
        }
    }

    pub fn sub_slices(&self, a: &mut [u64], b: &[u64]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = (*x + self.p - *y) % self.p;
        }
    }

    pub fn neg_slice(&self, a: &mut [u64]) {
        for x in a.iter_mut() {
            *x = (self.p - *x) % self.p;
        }
    }

    /// out = a * b reduced by the modulus. No allocation; out has length nu.
    pub fn mul_slices(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let p = self.p;
        if self.nu == 1 {
            out[0] = (a[0] * b[0]) % p;
            return;
        }
        let mut prod = [0u64; 2 * MAX_NU - 1];
        let n = self.nu;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        // reduce degree >= nu terms by x^nu = -(m_0 + ... + m_{nu-1} x^{nu-1})
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..n {
                let m = self.modulus[j];
                if m != 0 {
                    let idx = d - n + j;
                    prod[idx] = (prod[idx] + p * p - c * m % (p * p)) % p;
                }
            }
        }
        out[..n].copy_from_slice(&prod[..n]);
    }

    pub fn is_zero_slice(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Frobenius x -> x^p on a coordinate slice, in place.
    pub fn frob_slice(&self, a: &mut [u64]) {
        if self.nu == 1 {
            return;
        }
        let e = self.elem_from_slice(a);
        let r = e.pow(self.p);
        a.copy_from_slice(&r.c);
    }

    fn elem_from_slice(&self, a: &[u64]) -> FieldElem {
        FieldElem {
            params: Arc::new(self.clone()),
            c: a.to_vec(),
        }
    }

    // ----- element constructors -----

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        FieldElem {
            params: self.clone(),
            c: vec![0; self.nu],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        let mut c = vec![0; self.nu];
        c[0] = 1;
        FieldElem {
            params: self.clone(),
            c,
        }
    }

    /// Image of the integer n (prime-subfield element).
    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElem {
        let p = self.p as i64;
        let mut c = vec![0; self.nu];
        c[0] = ((n % p + p) % p) as u64;
        FieldElem {
            params: self.clone(),
            c,
        }
    }

    /// Element from explicit coordinates (length <= nu, zero padded).
    pub fn from_coords(self: &Arc<Self>, coords: &[u64]) -> Result<FieldElem> {
        if coords.len() > self.nu {
            return Err(Error::InvalidParams(format!(
                "{} coordinates for extension degree {}",
                coords.len(),
                self.nu
            )));
        }
        let mut c = vec![0; self.nu];
        for (i, &x) in coords.iter().enumerate() {
            c[i] = x % self.p;
        }
        Ok(FieldElem {
            params: self.clone(),
            c,
        })
    }

    /// Parse a field-element literal: a decimal integer for nu = 1, or
    /// colon-separated coordinates ("c0:c1:...") for nu > 1. Plain integers
    /// are accepted for any nu and land in the prime subfield.
    pub fn parse_elem(self: &Arc<Self>, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        if s.contains(':') {
            let coords: Vec<u64> = s
                .split(':')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad field literal {s:?}")))
                })
                .collect::<Result<_>>()?;
            self.from_coords(&coords)
        } else {
            let v: u64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad field literal {s:?}")))?;
            Ok(self.from_int(v as i64))
        }
    }

    /// All field elements in a fixed deterministic order.
    pub fn all_elems(self: &Arc<Self>) -> Vec<FieldElem> {
        let q = self.order();
        (0..q).map(|i| self.elem_by_index(i)).collect()
    }

    /// The i-th element in base-p coordinate order (used for enumeration
    /// and for deterministic pseudo-random draws in tests).
    pub fn elem_by_index(self: &Arc<Self>, i: u64) -> FieldElem {
        let mut c = vec![0; self.nu];
        let mut v = i % self.order();
        for slot in c.iter_mut() {
            *slot = v % self.p;
            v /= self.p;
        }
        FieldElem {
            params: self.clone(),
            c,
        }
    }
}

/// An element of F_{p^nu}: coordinates in the power basis of the modulus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem {
    params: Arc<FieldParams>,
    c: Vec<u64>,
}

impl FieldElem {
    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// True when the element lies in the prime subfield F_p.
    pub fn is_prime_subfield(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    /// The residue when the element lies in F_p.
    pub fn as_prime_int(&self) -> Option<u64> {
        if self.is_prime_subfield() {
            Some(self.c[0])
        } else {
            None
        }
    }

    fn check(&self, other: &FieldElem) {
        assert!(
            self.params == other.params,
            "field params mismatch in elementwise op"
        );
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.check(other);
        let mut c = self.c.clone();
        self.params.add_slices(&mut c, &other.c);
        FieldElem {
            params: self.params.clone(),
            c,
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.check(other);
        let mut c = self.c.clone();
        self.params.sub_slices(&mut c, &other.c);
        FieldElem {
            params: self.params.clone(),
            c,
        }
    }

    pub fn neg(&self) -> FieldElem {
        let mut c = self.c.clone();
        self.params.neg_slice(&mut c);
        FieldElem {
            params: self.params.clone(),
            c,
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.check(other);
        let mut c = vec![0; self.params.nu];
        self.params.mul_slices(&self.c, &other.c, &mut c);
        FieldElem {
            params: self.params.clone(),
            c,
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut result = self.params.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        result
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // a^(q-2) = a^{-1}; q is small here so this is fine.
        Ok(self.pow(self.params.order() - 2))
    }

    /// c -> c^p.
    pub fn frobenius(&self) -> FieldElem {
        if self.params.nu == 1 {
            self.clone()
        } else {
            self.pow(self.params.p)
        }
    }

    /// The inverse of frobenius: c -> c^(p^(nu-1)).
    pub fn frobenius_inverse(&self) -> FieldElem {
        if self.params.nu == 1 {
            self.clone()
        } else {
            self.pow(self.params.p.pow(self.params.nu as u32 - 1))
        }
    }

    /// k-fold frobenius, k possibly negative.
    pub fn frobenius_iter(&self, k: i64) -> FieldElem {
        let nu = self.params.nu as i64;
        let k = ((k % nu) + nu) % nu;
        let mut r = self.clone();
        for _ in 0..k {
            r = r.frobenius();
        }
        r
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.nu == 1 {
            write!(f, "{}", self.c[0])
        } else {
            let parts: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(":"))
        }
    }
}

impl std::ops::Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::add(self, rhs)
    }
}

impl std::ops::Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::sub(self, rhs)
    }
}

impl std::ops::Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::mul(self, rhs)
    }
}

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f4() -> Arc<FieldParams> {
        // F_4 = F_2[u]/(u^2+u+1)
        FieldParams::extension(2, vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn f5_inverse_of_two_is_three() {
        let f5 = FieldParams::prime(5).unwrap();
        let two = f5.from_int(2);
        assert_eq!(two.inv().unwrap(), f5.from_int(3));
    }

    #[test]
    fn zero_has_no_inverse() {
        let f5 = FieldParams::prime(5).unwrap();
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn f4_frobenius_of_generator() {
        let k = f4();
        let u = k.from_coords(&[0, 1]).unwrap();
        // u^2 = u + 1
        let expect = k.from_coords(&[1, 1]).unwrap();
        assert_eq!(u.frobenius(), expect);
    }

    #[test]
    fn frobenius_inverse_roundtrip() {
        for k in [f4(), FieldParams::extension(3, vec![1, 2, 0, 1]).unwrap()] {
            for e in k.all_elems() {
                assert_eq!(e.frobenius().frobenius_inverse(), e);
                assert_eq!(e.frobenius_inverse().frobenius(), e);
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(FieldParams::extension(2, vec![1, 0, 1]).is_err());
        assert!(FieldParams::prime(6).is_err());
    }

    #[test]
    fn ring_axioms_random() {
        let k = FieldParams::extension(5, vec![2, 4, 0, 1]).unwrap(); // deg-3 irreducible? validated at construction
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let q = k.order();
        for _ in 0..1000 {
            let a = k.elem_by_index(rng.gen_range(0..q));
            let b = k.elem_by_index(rng.gen_range(0..q));
            let c = k.elem_by_index(rng.gen_range(0..q));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b), b.mul(&a));
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let k = f4();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a = k.elem_by_index(rng.gen_range(0..4));
            let b = k.elem_by_index(rng.gen_range(0..4));
            assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
            assert_eq!(a.mul(&b).frobenius(), a.frobenius().mul(&b.frobenius()));
        }
    }

    #[test]
    fn nonzero_inverses() {
        for k in [FieldParams::prime(7).unwrap(), f4()] {
            for e in k.all_elems() {
                if !e.is_zero() {
                    assert!(e.mul(&e.inv().unwrap()).is_one());
                }
            }
        }
    }
}
