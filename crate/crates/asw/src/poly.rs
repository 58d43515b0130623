//! Sparse univariate polynomials over F_{p^nu}.
//!
//! Terms are kept in a BTreeMap from exponent to nonzero coefficient, so
//! iteration order (and hence serialization) is deterministic.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldParams};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyOverField {
    params: Arc<FieldParams>,
    terms: BTreeMap<u32, FieldElem>,
}

impl PolyOverField {
    pub fn zero(params: &Arc<FieldParams>) -> Self {
        PolyOverField {
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: &Arc<FieldParams>) -> Self {
        Self::constant(params.one())
    }

    pub fn constant(c: FieldElem) -> Self {
        let params = c.params().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        PolyOverField { params, terms }
    }

    /// c * x^e
    pub fn monomial(c: FieldElem, e: u32) -> Self {
        let params = c.params().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        PolyOverField { params, terms }
    }

    pub fn x(params: &Arc<FieldParams>) -> Self {
        Self::monomial(params.one(), 1)
    }

    pub fn from_coeffs(params: &Arc<FieldParams>, coeffs: &[FieldElem]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(i as u32, c.clone());
            }
        }
        PolyOverField {
            params: params.clone(),
            terms,
        }
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: u32) -> FieldElem {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| self.params.zero())
    }

    pub fn leading_coeff(&self) -> Option<&FieldElem> {
        self.terms.values().next_back()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, e: u32, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.add(c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.params);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert_add(e1 + e2, &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.params);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    pub fn shift_x(&self, e: u32) -> Self {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(k + e, v.clone());
        }
        PolyOverField {
            params: self.params.clone(),
            terms,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(&self.params);
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

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        // Horner over the dense range is wasteful for sparse polys; use powers.
        let mut acc = self.params.zero();
        for (e, c) in &self.terms {
            acc = acc.add(&c.mul(&x.pow(*e as u64)));
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, div: &Self) -> Result<(Self, Self)> {
        let dd = div.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = div.leading_coeff().unwrap().inv()?;
        let mut q = Self::zero(&self.params);
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let c = r.leading_coeff().unwrap().mul(&lead_inv);
            let e = dr - dd;
            q.insert_add(e, &c);
            let t = div.mul(&Self::monomial(c, e));
            r = r.sub(&t);
        }
        Ok((q, r))
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading_coeff().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(&lead.inv()?))
    }

    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// Returns (g, s, t) with g = gcd monic and s*self + t*other = g.
    pub fn extended_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        let params = &self.params;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(params), Self::zero(params));
        let (mut t0, mut t1) = (Self::zero(params), Self::one(params));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let lead = r0.leading_coeff().ok_or(Error::DivisionByZero)?.clone();
        let li = lead.inv()?;
        Ok((r0.scale(&li), s0.scale(&li), t0.scale(&li)))
    }

    /// base^e mod m, all over the same field.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Result<Self> {
        let mut result = Self::one(&self.params);
        let mut b = self.divrem(m)?.1;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).divrem(m)?.1;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).divrem(m)?.1;
            }
        }
        Ok(result)
    }

    /// Irreducibility over F_{p^nu} via the q-power Frobenius criterion.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            Some(0) | None => return false,
            Some(1) => return true,
            Some(n) => n as u64,
        };
        let q = self.params.order();
        let x = Self::x(&self.params);
        // r_m := x^(q^m) mod self, computed by iterating r -> r^q
        let mut r = x.clone();
        let mut frob_steps: Vec<Self> = vec![];
        for _ in 0..n {
            r = match r.powmod(q, self) {
                Ok(v) => v,
                Err(_) => return false,
            };
            frob_steps.push(r.clone());
        }
        if frob_steps[n as usize - 1] != x.divrem(self).map(|x| x.1).unwrap_or(x.clone()) {
            return false;
        }
        let mut k = n;
        let mut primes = vec![];
        let mut d = 2;
        while d * d <= k {
            if k % d == 0 {
                primes.push(d);
                while k % d == 0 {
                    k /= d;
                }
            }
            d += 1;
        }
        if k > 1 {
            primes.push(k);
        }
        for t in primes {
            let h = frob_steps[(n / t) as usize - 1].sub(&x);
            match self.gcd(&h) {
                Ok(g) => {
                    if g.degree() != Some(0) {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
        true
    }

    /// All monic polynomials of exact degree m, in deterministic order.
    pub fn monics_of_degree(params: &Arc<FieldParams>, m: u32) -> Vec<Self> {
        let q = params.order();
        let count = q.pow(m);
        let mut out = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut coeffs: Vec<FieldElem> = Vec::with_capacity(m as usize + 1);
            let mut v = idx;
            for _ in 0..m {
                coeffs.push(params.elem_by_index(v % q));
                v /= q;
            }
            coeffs.push(params.one());
            out.push(Self::from_coeffs(params, &coeffs));
        }
        out
    }

    /// All monic irreducibles of exact degree m.
    pub fn monic_irreducibles(params: &Arc<FieldParams>, m: u32) -> Vec<Self> {
        Self::monics_of_degree(params, m)
            .into_iter()
            .filter(|f| f.is_irreducible())
            .collect()
    }
}

impl fmt::Display for PolyOverField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_of_product_adds() {
        let f5 = FieldParams::prime(5).unwrap();
        let a = PolyOverField::from_coeffs(&f5, &[f5.from_int(1), f5.from_int(2), f5.from_int(3)]);
        let b = PolyOverField::from_coeffs(&f5, &[f5.from_int(4), f5.from_int(1)]);
        assert_eq!(a.mul(&b).degree(), Some(3));
        assert_eq!(a.mul(&PolyOverField::zero(&f5)).degree(), None);
    }

    #[test]
    fn divrem_roundtrip() {
        let f7 = FieldParams::prime(7).unwrap();
        let a = PolyOverField::from_coeffs(
            &f7,
            &[3, 1, 4, 1, 5]
                .iter()
                .map(|&c| f7.from_int(c))
                .collect::<Vec<_>>(),
        );
        let b = PolyOverField::from_coeffs(
            &f7,
            &[2, 0, 1]
                .iter()
                .map(|&c| f7.from_int(c))
                .collect::<Vec<_>>(),
        );
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(b.mul(&q).add(&r), a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn irreducibility_known_cases() {
        let f2 = FieldParams::prime(2).unwrap();
        let x2x1 = PolyOverField::from_coeffs(&f2, &[f2.one(), f2.one(), f2.one()]);
        assert!(x2x1.is_irreducible());
        let x2_1 = PolyOverField::from_coeffs(&f2, &[f2.one(), f2.zero(), f2.one()]);
        assert!(!x2_1.is_irreducible()); // (x+1)^2
        let f5 = FieldParams::prime(5).unwrap();
        // x^2 - 2 irreducible over F_5 (2 is a non-residue)
        let g = PolyOverField::from_coeffs(&f5, &[f5.from_int(-2), f5.zero(), f5.one()]);
        assert!(g.is_irreducible());
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // #monic irreducibles of degree m = (1/m) sum_{e|m} mu(e) q^{m/e}
        let f3 = FieldParams::prime(3).unwrap();
        assert_eq!(PolyOverField::monic_irreducibles(&f3, 1).len(), 3);
        assert_eq!(PolyOverField::monic_irreducibles(&f3, 2).len(), 3);
        assert_eq!(PolyOverField::monic_irreducibles(&f3, 3).len(), 8);
        assert_eq!(PolyOverField::monic_irreducibles(&f3, 4).len(), 18);
    }

    #[test]
    fn extended_gcd_bezout() {
        let f5 = FieldParams::prime(5).unwrap();
        let a = PolyOverField::from_coeffs(
            &f5,
            &[1, 0, 1]
                .iter()
                .map(|&c| f5.from_int(c))
                .collect::<Vec<_>>(),
        );
        let b = PolyOverField::from_coeffs(
            &f5,
            &[2, 1].iter().map(|&c| f5.from_int(c)).collect::<Vec<_>>(),
        );
        let (g, s, t) = a.extended_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
