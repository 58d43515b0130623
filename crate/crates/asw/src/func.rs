//! Elements of the affine coordinate rings R_n = k[x, y_0, ..., y_{n-1}].
//!
//! An element is kept in reduced form: every y_i-exponent is below p, so the
//! monomials x^e y^a (a < p^n encoding the digit vector of y-exponents) are
//! a k[x]-module basis and the representation is unique. Reduction rewrites
//! y_i^p -> y_i + f_i and therefore needs the tower's standard-form
//! equations; multiplication and powers take a [`crate::tower::Tower`].

use crate::field::{FieldElem, FieldParams};
use crate::poly::PolyOverField;
use crate::tower::Tower;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Monomial x^x * y^a; `a` encodes the y-exponent digits in base p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub a: u32,
    pub x: u32,
}

/// A reduced element of R_level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncElem {
    level: usize,
    params: Arc<FieldParams>,
    terms: BTreeMap<Mono, FieldElem>,
}

impl FuncElem {
    pub fn zero(params: &Arc<FieldParams>, level: usize) -> Self {
        FuncElem {
            level,
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem, level: usize) -> Self {
        let params = c.params().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono { a: 0, x: 0 }, c);
        }
        FuncElem {
            level,
            params,
            terms,
        }
    }

    pub fn one(params: &Arc<FieldParams>, level: usize) -> Self {
        Self::constant(params.one(), level)
    }

    /// c * x^e * y^a (a must already be a valid digit vector, i.e. < p^level).
    pub fn monomial(params: &Arc<FieldParams>, level: usize, a: u32, x: u32, c: FieldElem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono { a, x }, c);
        }
        FuncElem {
            level,
            params: params.clone(),
            terms,
        }
    }

    /// The variable y_i as an element of R_level (needs i < level).
    pub fn y_var(params: &Arc<FieldParams>, level: usize, i: usize) -> Self {
        let p = params.p() as u32;
        Self::monomial(params, level, p.pow(i as u32), 0, params.one())
    }

    pub fn from_x_poly(poly: &PolyOverField, level: usize) -> Self {
        let params = poly.params().clone();
        let mut terms = BTreeMap::new();
        for (e, c) in poly.terms() {
            terms.insert(Mono { a: 0, x: *e }, c.clone());
        }
        FuncElem {
            level,
            params,
            terms,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, a: u32, x: u32) -> FieldElem {
        self.terms
            .get(&Mono { a, x })
            .cloned()
            .unwrap_or_else(|| self.params.zero())
    }

    /// View at a higher level (R_m embeds in R_n for m <= n).
    pub fn lift_to(&self, level: usize) -> Self {
        assert!(level >= self.level, "cannot lower a function's level");
        let mut out = self.clone();
        out.level = level;
        out
    }

    pub(crate) fn insert_add(&mut self, m: Mono, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let level = self.level.max(other.level);
        let mut out = self.clone().lift_to(level);
        for (m, c) in &other.terms {
            out.insert_add(*m, c);
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

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.params, self.level);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    /// Multiply by c * x^e (never needs reduction).
    pub fn scale_x(&self, c: &FieldElem, e: u32) -> Self {
        if c.is_zero() {
            return Self::zero(&self.params, self.level);
        }
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let w = v.mul(c);
            if !w.is_zero() {
                terms.insert(Mono { a: m.a, x: m.x + e }, w);
            }
        }
        FuncElem {
            level: self.level,
            params: self.params.clone(),
            terms,
        }
    }

    /// Full product; needs the tower for y_i^p rewriting.
    pub fn mul(&self, other: &Self, tower: &Tower) -> Self {
        let level = self.level.max(other.level);
        let p = self.params.p() as u32;
        let mut raw: Vec<RawTerm> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            let d1 = digits(m1.a, p, level);
            for (m2, c2) in &other.terms {
                let c = c1.mul(c2);
                if c.is_zero() {
                    continue;
                }
                let mut ys = d1.clone();
                for (i, d) in digits(m2.a, p, level).into_iter().enumerate() {
                    ys[i] += d;
                }
                raw.push(RawTerm {
                    ys,
                    x: m1.x + m2.x,
                    c,
                });
            }
        }
        tower.reduce_raw(level, raw)
    }

    pub fn pow(&self, mut e: u32, tower: &Tower) -> Self {
        let mut result = Self::one(&self.params, self.level);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b, tower);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, tower);
            }
        }
        result
    }

    /// Group terms by the y-exponent vector: a -> coefficient in k[x].
    pub fn y_coefficients(&self) -> BTreeMap<u32, PolyOverField> {
        let mut out: BTreeMap<u32, PolyOverField> = BTreeMap::new();
        for (m, c) in &self.terms {
            let entry = out
                .entry(m.a)
                .or_insert_with(|| PolyOverField::zero(&self.params));
            *entry = entry.add(&PolyOverField::monomial(c.clone(), m.x));
        }
        out
    }

    /// Split by the exponent of the top variable y_{level-1}: returns the
    /// coefficients h_b in R_{level-1} with self = sum_b h_b y_{level-1}^b.
    pub fn split_top_variable(&self) -> Vec<FuncElem> {
        assert!(self.level >= 1);
        let p = self.params.p() as u32;
        let top = p.pow(self.level as u32 - 1);
        let mut out = vec![Self::zero(&self.params, self.level - 1); p as usize];
        for (m, c) in &self.terms {
            let b = (m.a / top) as usize;
            let rest = m.a % top;
            out[b].insert_add(Mono { a: rest, x: m.x }, c);
        }
        out
    }
}

pub(crate) fn digits(a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    let mut a = a;
    for slot in v.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    debug_assert_eq!(a, 0, "digit vector too short for exponent");
    v
}

pub(crate) fn undigits(ds: &[u32], p: u32) -> u32 {
    let mut acc = 0u32;
    for &d in ds.iter().rev() {
        acc = acc * p + d;
    }
    acc
}

/// Unreduced monomial used inside products and rewriting.
#[derive(Debug, Clone)]
pub(crate) struct RawTerm {
    /// y-exponents, possibly >= p.
    pub ys: Vec<u32>,
    pub x: u32,
    pub c: FieldElem,
}

impl fmt::Display for FuncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.params.p() as u32;
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if m.x > 0 {
                write!(f, "*x^{}", m.x)?;
            }
            for (i, d) in digits(m.a, p, self.level).into_iter().enumerate() {
                if d > 0 {
                    write!(f, "*y{i}^{d}")?;
                }
            }
        }
        Ok(())
    }
}
