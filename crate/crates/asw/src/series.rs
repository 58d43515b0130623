//! Truncated series: the coefficient ring A_n = k[T]/(T^(p^n)) and the
//! polynomial ring A_n[x] over it.
//!
//! [`TPoly`] is a dense T-polynomial with all exponents below p^n; products
//! silently drop T-degrees at or above the truncation. [`TruncSeries`] is
//! x-sparse with `TPoly` coefficients, which is the shape the Frobenius
//! element and the nuclear matrix want: few x-terms, dense small T-blocks.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldParams};
use crate::poly::PolyOverField;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Element of A_n = k[T]/(T^(p^n)), dense in T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    p_power: u64,
    params: Arc<FieldParams>,
    /// Coefficients c[t]; invariant: len == p_power, trailing zeros kept.
    c: Vec<FieldElem>,
}

impl TPoly {
    pub fn zero(params: &Arc<FieldParams>, p_power: u64) -> Self {
        TPoly {
            p_power,
            params: params.clone(),
            c: vec![params.zero(); p_power as usize],
        }
    }

    pub fn one(params: &Arc<FieldParams>, p_power: u64) -> Self {
        let mut z = Self::zero(params, p_power);
        z.c[0] = params.one();
        z
    }

    pub fn from_coeffs(params: &Arc<FieldParams>, p_power: u64, coeffs: &[FieldElem]) -> Self {
        let mut z = Self::zero(params, p_power);
        for (t, v) in coeffs.iter().enumerate() {
            if (t as u64) < p_power {
                z.c[t] = v.clone();
            }
        }
        z
    }

    pub fn monomial(params: &Arc<FieldParams>, p_power: u64, t: u64, c: FieldElem) -> Self {
        let mut z = Self::zero(params, p_power);
        if t < p_power {
            z.c[t as usize] = c;
        }
        z
    }

    pub fn p_power(&self) -> u64 {
        self.p_power
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn coeff(&self, t: u64) -> FieldElem {
        if t < self.p_power {
            self.c[t as usize].clone()
        } else {
            self.params.zero()
        }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    /// T-adic valuation: the least t with a nonzero coefficient.
    pub fn v_t(&self) -> Option<u64> {
        self.c.iter().position(|v| !v.is_zero()).map(|t| t as u64)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p_power, other.p_power, "T truncation mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&other.c) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&other.c) {
            *a = a.sub(b);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.p_power as usize;
        let mut out = Self::zero(&self.params, self.p_power);
        for i in 0..n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if other.c[j].is_zero() {
                    continue;
                }
                out.c[i + j] = out.c[i + j].add(&self.c[i].mul(&other.c[j]));
            }
        }
        out
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a = a.mul(k);
        }
        out
    }

    /// Inverse of a unit (constant term invertible in k).
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.c[0];
        if c0.is_zero() {
            return Err(Error::NotAUnit("T-constant term is zero".into()));
        }
        let c0i = c0.inv()?;
        let n = self.p_power as usize;
        let mut inv = Self::zero(&self.params, self.p_power);
        inv.c[0] = c0i.clone();
        for t in 1..n {
            // c_0 * inv_t = - sum_{j=1..t} c_j inv_{t-j}
            let mut acc = self.params.zero();
            for j in 1..=t {
                if !self.c[j].is_zero() {
                    acc = acc.add(&self.c[j].mul(&inv.c[t - j]));
                }
            }
            inv.c[t] = acc.neg().mul(&c0i);
        }
        Ok(inv)
    }

    pub fn frobenius_coeffs(&self) -> Self {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a = a.frobenius();
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.params, self.p_power);
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

    /// True when every coefficient lies in the prime subfield.
    pub fn is_prime_subfield(&self) -> bool {
        self.c.iter().all(|v| v.is_prime_subfield())
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match t {
                0 => write!(f, "{v}")?,
                1 => write!(f, "{v}*T")?,
                _ => write!(f, "{v}*T^{t}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Element of A_n[x]: sparse in x, dense truncated in T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    p_power: u64,
    params: Arc<FieldParams>,
    terms: BTreeMap<u32, TPoly>,
}

impl TruncSeries {
    pub fn zero(params: &Arc<FieldParams>, p_power: u64) -> Self {
        TruncSeries {
            p_power,
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: &Arc<FieldParams>, p_power: u64) -> Self {
        let mut z = Self::zero(params, p_power);
        z.terms.insert(0, TPoly::one(params, p_power));
        z
    }

    /// Single term c * x^xe * T^te.
    pub fn term(params: &Arc<FieldParams>, p_power: u64, xe: u32, te: u64, c: FieldElem) -> Self {
        let mut z = Self::zero(params, p_power);
        if te < p_power && !c.is_zero() {
            z.terms.insert(xe, TPoly::monomial(params, p_power, te, c));
        }
        z
    }

    pub fn from_x_poly(poly: &PolyOverField, p_power: u64) -> Self {
        let params = poly.params().clone();
        let mut z = Self::zero(&params, p_power);
        for (e, c) in poly.terms() {
            z.terms
                .insert(*e, TPoly::monomial(&params, p_power, 0, c.clone()));
        }
        z
    }

    pub fn p_power(&self) -> u64 {
        self.p_power
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|t| t.is_zero())
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.terms
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| *k)
            .next_back()
    }

    /// The coefficient of x^i as an element of A_n.
    pub fn coeff_x(&self, i: u32) -> TPoly {
        self.terms
            .get(&i)
            .cloned()
            .unwrap_or_else(|| TPoly::zero(&self.params, self.p_power))
    }

    /// Coefficient of x^i T^t.
    pub fn coeff(&self, i: u32, t: u64) -> FieldElem {
        self.coeff_x(i).coeff(t)
    }

    pub fn set_term(&mut self, xe: u32, te: u64, c: FieldElem) {
        if te >= self.p_power {
            return;
        }
        let entry = self
            .terms
            .entry(xe)
            .or_insert_with(|| TPoly::zero(&self.params, self.p_power));
        entry.c[te as usize] = c;
    }

    pub fn x_terms(&self) -> impl Iterator<Item = (&u32, &TPoly)> {
        self.terms.iter()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p_power, other.p_power, "T truncation mismatch");
    }

    fn insert_add(&mut self, xe: u32, v: &TPoly) {
        if v.is_zero() {
            return;
        }
        match self.terms.get_mut(&xe) {
            Some(t) => {
                let s = t.add(v);
                if s.is_zero() {
                    self.terms.remove(&xe);
                } else {
                    *t = s;
                }
            }
            None => {
                self.terms.insert(xe, v.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert_add(*e, v);
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
        self.check(other);
        let mut out = Self::zero(&self.params, self.p_power);
        for (e1, v1) in &self.terms {
            if v1.is_zero() {
                continue;
            }
            for (e2, v2) in &other.terms {
                if v2.is_zero() {
                    continue;
                }
                out.insert_add(e1 + e2, &v1.mul(v2));
            }
        }
        out
    }

    /// Drop all x-terms of degree above `deg`.
    pub fn truncate_x(&self, deg: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|&e, _| e <= deg);
        out
    }

    /// Multiplicative inverse of a unit, modulo (T^(p^n), x^(deg+1)).
    /// Requires the x^0 coefficient to be a unit of A_n.
    pub fn inverse_to_x_degree(&self, deg: u32) -> Result<Self> {
        let b0 = self.coeff_x(0);
        let b0i = b0
            .inverse()
            .map_err(|_| Error::NotAUnit("x-constant term of series is not a unit".into()))?;
        let mut inv = Self::zero(&self.params, self.p_power);
        inv.terms.insert(0, b0i.clone());
        for i in 1..=deg {
            // c_i = -b0^{-1} * sum_{j<i} b_{i-j} c_j
            let mut acc = TPoly::zero(&self.params, self.p_power);
            for (j, cj) in inv.terms.iter() {
                if *j >= i {
                    continue;
                }
                let b = self.coeff_x(i - j);
                if !b.is_zero() {
                    acc = acc.add(&b.mul(cj));
                }
            }
            if !acc.is_zero() {
                inv.terms.insert(i, acc.neg().mul(&b0i));
            }
        }
        Ok(inv)
    }

    /// The semilinear sigma: p-th power on k[x] (so x -> x^p and frobenius on
    /// constants), identity on T.
    pub fn sigma(&self) -> Self {
        let p = self.params.p() as u32;
        let mut out = Self::zero(&self.params, self.p_power);
        for (e, v) in &self.terms {
            out.terms.insert(e * p, v.frobenius_coeffs());
        }
        out
    }

    /// v_T of the coefficient of x^i (None when the coefficient is 0).
    pub fn v_t_of_x(&self, i: u32) -> Option<u64> {
        self.terms.get(&i).and_then(|v| v.v_t())
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, v) in &self.terms {
            if v.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "({v})")?,
                1 => write!(f, "({v})*x")?,
                _ => write!(f, "({v})*x^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn one_plus_xt(params: &Arc<FieldParams>, p_power: u64) -> TruncSeries {
        TruncSeries::one(params, p_power).add(&TruncSeries::term(
            params,
            p_power,
            1,
            1,
            params.one(),
        ))
    }

    #[test]
    fn char2_square() {
        // (1 + xT)^2 = 1 + x^2 T^2 over F_2 with truncation T^4
        let f2 = FieldParams::prime(2).unwrap();
        let f = one_plus_xt(&f2, 4);
        let sq = f.mul(&f);
        let expect = TruncSeries::one(&f2, 4).add(&TruncSeries::term(&f2, 4, 2, 2, f2.one()));
        assert_eq!(sq, expect);
    }

    #[test]
    fn geometric_inverse() {
        // (1 + xT)^{-1} = 1 - xT once T^2 = 0
        let f3 = FieldParams::prime(3).unwrap();
        let f = one_plus_xt(&f3, 2);
        let inv = f.inverse_to_x_degree(5).unwrap();
        let expect =
            TruncSeries::one(&f3, 2).add(&TruncSeries::term(&f3, 2, 1, 1, f3.from_int(-1)));
        assert_eq!(inv, expect);
    }

    #[test]
    fn mul_by_zero() {
        let f5 = FieldParams::prime(5).unwrap();
        let f = one_plus_xt(&f5, 5);
        assert!(f.mul(&TruncSeries::zero(&f5, 5)).is_zero());
    }

    #[test]
    fn unit_inverse_identity_to_degree() {
        let f5 = FieldParams::prime(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut f = TruncSeries::one(&f5, 25);
            for _ in 0..6 {
                let xe = rng.gen_range(0..5u32);
                let te = rng.gen_range(0..25u64);
                let c = f5.from_int(rng.gen_range(0..5i64));
                if xe == 0 && te == 0 {
                    continue;
                }
                f = f.add(&TruncSeries::term(&f5, 25, xe, te, c));
            }
            let d = 8;
            let inv = f.inverse_to_x_degree(d).unwrap();
            let prod = f.mul(&inv).truncate_x(d);
            assert_eq!(prod, TruncSeries::one(&f5, 25));
        }
    }

    #[test]
    fn ring_axioms_random() {
        let f3 = FieldParams::prime(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rand_series = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut f = TruncSeries::zero(&f3, 9);
            for _ in 0..5 {
                f = f.add(&TruncSeries::term(
                    &f3,
                    9,
                    rng.gen_range(0..4u32),
                    rng.gen_range(0..9u64),
                    f3.from_int(rng.gen_range(0..3i64)),
                ));
            }
            f
        };
        for _ in 0..1000 {
            let a = rand_series(&mut rng);
            let b = rand_series(&mut rng);
            let c = rand_series(&mut rng);
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}
