//! Truncated Witt vector arithmetic.
//!
//! The universal addition/subtraction polynomials are derived once per
//! (p, n) over the integers by exact ghost-component recursion: the m-th
//! carry polynomial is
//!
//! ```text
//! s_m = (w_m(a) +/- w_m(b) - sum_{i<m} p^i s_i^(p^(m-i))) / p^m
//! ```
//!
//! with w_m the ghost polynomial. Every division is checked exact (a
//! non-integral intermediate is a bug), the result is reduced mod p and
//! cached. This avoids hand-transcribed carry formulas and extends to
//! length 3 automatically; the default cap is 3 because expansion size
//! grows quickly with length.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldParams};
use crate::poly::PolyOverField;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

static LEVEL_CAP: AtomicUsize = AtomicUsize::new(3);

/// Maximum Witt length handed out by [`WittCtx::get`]. Raising it is
/// supported but expansion sizes grow fast with p and n.
pub fn level_cap() -> usize {
    LEVEL_CAP.load(Ordering::Relaxed)
}

pub fn set_level_cap(cap: usize) {
    LEVEL_CAP.store(cap, Ordering::Relaxed);
}

/// Multivariate polynomial over Z, used only while deriving carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl ZPoly {
    pub fn zero(vars: usize) -> Self {
        ZPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0u32; vars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        ZPoly { vars, terms }
    }

    fn insert_add(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = {
            let mut t = BTreeMap::new();
            t.insert(vec![0; self.vars], BigInt::one());
            ZPoly {
                vars: self.vars,
                terms: t,
            }
        };
        let mut b = self.clone();
        let mut e = e;
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

    /// Exact division by an integer; errors if any coefficient resists.
    pub fn div_exact(&self, k: &BigInt) -> Result<Self> {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            if (&*c % k).is_zero() {
                *c = &*c / k;
            } else {
                return Err(Error::internal(format!(
                    "non-integral Witt carry intermediate: {c} not divisible by {k}"
                )));
            }
        }
        Ok(out)
    }

    /// Evaluate over Z.
    pub fn eval_z(&self, vals: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &ex) in e.iter().enumerate() {
                for _ in 0..ex {
                    term *= &vals[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Reduce coefficients into F_p.
    fn mod_p(&self, p: u64) -> CarryPoly {
        let pb = BigInt::from(p);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            let r: u64 = r.try_into().unwrap();
            if r != 0 {
                terms.insert(e.clone(), r);
            }
        }
        CarryPoly {
            vars: self.vars,
            terms,
        }
    }
}

/// Carry polynomial with coefficients already reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl CarryPoly {
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u64)> {
        self.terms.iter()
    }

    /// Evaluate in any commutative F_p-algebra.
    pub fn eval<R: WittRing>(&self, vals: &[R]) -> R {
        assert!(!vals.is_empty());
        let ctx = &vals[0];
        let mut acc = ctx.wr_int(0);
        for (e, c) in &self.terms {
            let mut term = ctx.wr_int(*c as i64);
            for (i, &ex) in e.iter().enumerate() {
                if ex > 0 {
                    term = term.wr_mul(&wr_pow(&vals[i], ex));
                }
            }
            acc = acc.wr_add(&term);
        }
        acc
    }
}

fn wr_pow<R: WittRing>(base: &R, mut e: u32) -> R {
    let mut result = base.wr_int(1);
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.wr_mul(&b);
        }
        e >>= 1;
        if e > 0 {
            b = b.wr_mul(&b);
        }
    }
    result
}

/// Minimal commutative-ring interface the carry evaluator needs. The
/// receiver of `wr_int` is only a context handle (it carries the field
/// parameters); its value is ignored.
pub trait WittRing: Clone {
    fn wr_add(&self, other: &Self) -> Self;
    fn wr_mul(&self, other: &Self) -> Self;
    fn wr_int(&self, c: i64) -> Self;
}

impl WittRing for FieldElem {
    fn wr_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn wr_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn wr_int(&self, c: i64) -> Self {
        self.params().from_int(c)
    }
}

impl WittRing for PolyOverField {
    fn wr_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn wr_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn wr_int(&self, c: i64) -> Self {
        PolyOverField::constant(self.params().from_int(c))
    }
}

/// Cached universal carries for one (p, n).
#[derive(Debug)]
pub struct WittCtx {
    p: u64,
    n: usize,
    /// sum[m] computes coordinate m of a + b in vars a_0..a_{n-1}, b_0..b_{n-1}.
    sum: Vec<CarryPoly>,
    /// diff[m] computes coordinate m of a - b.
    diff: Vec<CarryPoly>,
    /// Integral versions, kept for the ghost-component cross-checks.
    sum_z: Vec<ZPoly>,
}

type CtxCache = Mutex<HashMap<(u64, usize), Arc<WittCtx>>>;

static CTX_CACHE: OnceLock<CtxCache> = OnceLock::new();

impl WittCtx {
    pub fn get(p: u64, n: usize) -> Result<Arc<WittCtx>> {
        if n == 0 {
            return Err(Error::InvalidParams("Witt length must be positive".into()));
        }
        if n > level_cap() {
            return Err(Error::InvalidParams(format!(
                "Witt length {n} exceeds the level cap {} (see set_level_cap)",
                level_cap()
            )));
        }
        let cache = CTX_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(ctx) = guard.get(&(p, n)) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(Self::derive(p, n)?);
        guard.insert((p, n), ctx.clone());
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ghost polynomial w_m in the coordinates `vars[base..base+m+1]`.
    fn ghost(vars: usize, base: usize, m: usize, p: u64) -> ZPoly {
        let mut acc = ZPoly::zero(vars);
        let pb = BigInt::from(p);
        #[allow(clippy::needless_range_loop)]
        for i in 0..=m {
            let mut pw = BigInt::one();
            for _ in 0..i {
                pw *= &pb;
            }
            let exp = (p as u32).pow((m - i) as u32);
            acc = acc.add(&ZPoly::var(vars, base + i).pow(exp).scale(&pw));
        }
        acc
    }

    fn derive(p: u64, n: usize) -> Result<WittCtx> {
        let vars = 2 * n;
        let mut sum: Vec<ZPoly> = Vec::with_capacity(n);
        let mut diff: Vec<ZPoly> = Vec::with_capacity(n);
        let pb = BigInt::from(p);
        for m in 0..n {
            let wa = Self::ghost(vars, 0, m, p);
            let wb = Self::ghost(vars, n, m, p);
            let mut s_target = wa.add(&wb);
            let mut d_target = wa.sub(&wb);
            let mut pm = BigInt::one();
            for i in 0..m {
                let exp = (p as u32).pow((m - i) as u32);
                s_target = s_target.sub(&sum[i].pow(exp).scale(&pm));
                d_target = d_target.sub(&diff[i].pow(exp).scale(&pm));
                pm *= &pb;
            }
            pm = BigInt::one();
            for _ in 0..m {
                pm *= &pb;
            }
            sum.push(s_target.div_exact(&pm)?);
            diff.push(d_target.div_exact(&pm)?);
        }
        Ok(WittCtx {
            p,
            n,
            sum: sum.iter().map(|z| z.mod_p(p)).collect(),
            diff: diff.iter().map(|z| z.mod_p(p)).collect(),
            sum_z: sum,
        })
    }

    pub fn sum_carry(&self, m: usize) -> &CarryPoly {
        &self.sum[m]
    }

    pub fn diff_carry(&self, m: usize) -> &CarryPoly {
        &self.diff[m]
    }

    pub fn sum_carry_z(&self, m: usize) -> &ZPoly {
        &self.sum_z[m]
    }

    fn combine<R: WittRing>(&self, carries: &[CarryPoly], u: &[R], v: &[R]) -> Result<Vec<R>> {
        if u.len() != v.len() {
            return Err(Error::Mismatch(format!(
                "Witt lengths differ: {} vs {}",
                u.len(),
                v.len()
            )));
        }
        if u.len() > self.n {
            return Err(Error::Mismatch("Witt vector longer than context".into()));
        }
        let mut vals: Vec<R> = Vec::with_capacity(2 * self.n);
        vals.extend_from_slice(u);
        for _ in u.len()..self.n {
            vals.push(u[0].wr_int(0));
        }
        vals.extend_from_slice(v);
        for _ in v.len()..self.n {
            vals.push(u[0].wr_int(0));
        }
        Ok((0..u.len()).map(|m| carries[m].eval(&vals)).collect())
    }

    pub fn add<R: WittRing>(&self, u: &[R], v: &[R]) -> Result<Vec<R>> {
        self.combine(&self.sum, u, v)
    }

    pub fn sub<R: WittRing>(&self, u: &[R], v: &[R]) -> Result<Vec<R>> {
        self.combine(&self.diff, u, v)
    }
}

/// A truncated Witt vector over a commutative F_p-algebra.
#[derive(Debug, Clone)]
pub struct WittVec<R: WittRing> {
    ctx: Arc<WittCtx>,
    coords: Vec<R>,
}

impl<R: WittRing + PartialEq> PartialEq for WittVec<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p()
            && self.ctx.n() == other.ctx.n()
            && self.coords == other.coords
    }
}

impl<R: WittRing> WittVec<R> {
    pub fn new(ctx: Arc<WittCtx>, coords: Vec<R>) -> Result<Self> {
        if coords.is_empty() || coords.len() > ctx.n() {
            return Err(Error::InvalidParams(
                "Witt vector length must be in 1..=ctx.n".into(),
            ));
        }
        Ok(WittVec { ctx, coords })
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn witt_add(&self, other: &Self) -> Result<Self> {
        Ok(WittVec {
            ctx: self.ctx.clone(),
            coords: self.ctx.add(&self.coords, &other.coords)?,
        })
    }

    pub fn witt_sub(&self, other: &Self) -> Result<Self> {
        Ok(WittVec {
            ctx: self.ctx.clone(),
            coords: self.ctx.sub(&self.coords, &other.coords)?,
        })
    }
}

/// Witt coordinates over F_p of an ordinary integer, computed by repeated
/// Witt addition of 1 (c is reduced mod p^n first; that determines the
/// truncated vector).
pub fn integer_to_witt(params: &Arc<FieldParams>, ctx: &WittCtx, c: u64) -> Vec<FieldElem> {
    let n = ctx.n();
    let pn = ctx.p().pow(n as u32);
    let c = c % pn;
    let mut one = vec![params.zero(); n];
    one[0] = params.one();
    let mut acc = vec![params.zero(); n];
    for _ in 0..c {
        acc = ctx.add(&acc, &one).expect("lengths match");
    }
    acc
}

/// The right-hand side f([x]) of the Artin-Schreier-Witt equation as a
/// Witt vector of polynomials: each coefficient c_i (a Witt vector of
/// constants) is multiplied by the Teichmueller lift [x^i], which acts
/// coordinate-wise as (c_0 x^i, c_1 x^(ip), c_2 x^(ip^2), ...), and the
/// terms are Witt-summed.
///
/// Validates the minimal-break conditions: every exponent i is prime to p
/// and c_{i,j} != 0 only when i <= d * p^j.
pub fn build_rhs(
    params: &Arc<FieldParams>,
    ctx: &Arc<WittCtx>,
    coeffs: &BTreeMap<u32, Vec<FieldElem>>,
    d: u64,
) -> Result<Vec<PolyOverField>> {
    let p = ctx.p();
    let n = ctx.n();
    let mut acc: Vec<PolyOverField> = vec![PolyOverField::zero(params); n];
    for (&i, witt_coeff) in coeffs {
        if i == 0 || (i as u64).is_multiple_of(p) {
            return Err(Error::spec(format!("exponent {i} is not prime to p = {p}")));
        }
        if witt_coeff.len() > n {
            return Err(Error::spec(format!(
                "coefficient of X^{i} has {} Witt coordinates; tower has {n} levels",
                witt_coeff.len()
            )));
        }
        let mut term: Vec<PolyOverField> = Vec::with_capacity(n);
        for j in 0..n {
            let c = witt_coeff.get(j).cloned().unwrap_or_else(|| params.zero());
            if !c.is_zero() {
                let bound = d.saturating_mul(p.pow(j as u32));
                if (i as u64) > bound {
                    return Err(Error::spec(format!(
                        "break condition violated: c_{{{i},{j}}} != 0 but {i} > d*p^{j} = {bound}"
                    )));
                }
            }
            let e = (i as u64).checked_mul(p.pow(j as u32)).ok_or_else(|| {
                Error::InvalidParams("exponent overflow in Teichmueller term".into())
            })?;
            term.push(PolyOverField::monomial(c, e as u32));
        }
        acc = ctx.add(&acc, &term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn consts(params: &Arc<FieldParams>, vals: &[i64]) -> Vec<FieldElem> {
        vals.iter().map(|&v| params.from_int(v)).collect()
    }

    #[test]
    fn carry_examples_small_p() {
        // p=2, n=2: sum coordinate 1 = a1 + b1 + a0 b0
        let ctx = WittCtx::get(2, 2).unwrap();
        let expected: Vec<(Vec<u32>, u64)> = vec![
            (vec![0, 1, 0, 0], 1), // a1
            (vec![1, 0, 1, 0], 1), // a0 b0
            (vec![0, 0, 0, 1], 1), // b1
        ];
        let got: Vec<(Vec<u32>, u64)> = ctx
            .sum_carry(1)
            .terms()
            .map(|(e, c)| (e.clone(), *c))
            .collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(got, expected);

        // p=3, n=2: sum coordinate 1 = a1 + b1 + 2 a0^2 b0 + 2 a0 b0^2
        let ctx3 = WittCtx::get(3, 2).unwrap();
        let got3: Vec<(Vec<u32>, u64)> = ctx3
            .sum_carry(1)
            .terms()
            .map(|(e, c)| (e.clone(), *c))
            .collect();
        let mut expected3 = vec![
            (vec![0, 1, 0, 0], 1),
            (vec![0, 0, 0, 1], 1),
            (vec![2, 0, 1, 0], 2),
            (vec![1, 0, 2, 0], 2),
        ];
        expected3.sort();
        assert_eq!(got3, expected3);
    }

    #[test]
    fn coordinate_zero_is_plain_sum() {
        for p in [2u64, 3, 5, 7] {
            let ctx = WittCtx::get(p, 1).unwrap();
            let got: Vec<(Vec<u32>, u64)> = ctx
                .sum_carry(0)
                .terms()
                .map(|(e, c)| (e.clone(), *c))
                .collect();
            assert_eq!(got, vec![(vec![0, 1], 1), (vec![1, 0], 1)]);
        }
    }

    #[test]
    fn f2_subtraction_example() {
        // (1,0) - (1,1) = (0,1) over F_2
        let f2 = FieldParams::prime(2).unwrap();
        let ctx = WittCtx::get(2, 2).unwrap();
        let u = WittVec::new(ctx.clone(), consts(&f2, &[1, 0])).unwrap();
        let v = WittVec::new(ctx.clone(), consts(&f2, &[1, 1])).unwrap();
        let d = u.witt_sub(&v).unwrap();
        assert_eq!(d.coords(), consts(&f2, &[0, 1]).as_slice());
        // and addition undoes it
        assert_eq!(d.witt_add(&v).unwrap(), u);
    }

    #[test]
    fn three_ones_make_three_in_w_f3() {
        let f3 = FieldParams::prime(3).unwrap();
        let ctx = WittCtx::get(3, 2).unwrap();
        let one = WittVec::new(ctx.clone(), consts(&f3, &[1, 0])).unwrap();
        let s = one.witt_add(&one).unwrap().witt_add(&one).unwrap();
        assert_eq!(s.coords(), consts(&f3, &[0, 1]).as_slice());
        assert_eq!(integer_to_witt(&f3, &ctx, 3), consts(&f3, &[0, 1]));
    }

    #[test]
    fn add_zero_is_identity() {
        let f5 = FieldParams::prime(5).unwrap();
        let ctx = WittCtx::get(5, 2).unwrap();
        let u = WittVec::new(ctx.clone(), consts(&f5, &[3, 4])).unwrap();
        let z = WittVec::new(ctx.clone(), consts(&f5, &[0, 0])).unwrap();
        assert_eq!(u.witt_add(&z).unwrap(), u);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn ghost_components_add() {
        // For lifted coordinates, the ghost components of a Witt sum agree
        // with the sums of ghost components mod p^(m+1).
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 3, 5] {
            let params = FieldParams::prime(p).unwrap();
            let n = 3usize;
            let ctx = WittCtx::get(p, n).unwrap();
            for _ in 0..150 {
                let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                let ae = consts(&params, &a.iter().map(|&x| x as i64).collect::<Vec<_>>());
                let be = consts(&params, &b.iter().map(|&x| x as i64).collect::<Vec<_>>());
                let s = ctx.add(&ae, &be).unwrap();
                let s_lift: Vec<BigInt> = s.iter().map(|e| BigInt::from(e.coords()[0])).collect();
                for m in 0..n {
                    let ghost = |v: &[BigInt]| -> BigInt {
                        let mut acc = BigInt::zero();
                        for i in 0..=m {
                            let mut t = v[i].clone();
                            let e = (p as u32).pow((m - i) as u32);
                            t = num_traits::pow(t, e as usize);
                            for _ in 0..i {
                                t *= p;
                            }
                            acc += t;
                        }
                        acc
                    };
                    let al: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
                    let bl: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
                    let lhs = ghost(&s_lift);
                    let rhs = ghost(&al) + ghost(&bl);
                    let modulus = BigInt::from(p.pow(m as u32 + 1));
                    assert!(
                        ((lhs - rhs) % modulus).is_zero(),
                        "ghost mismatch at p={p}, m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn sub_is_inverse_of_add() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for p in [2u64, 3, 5] {
            let params = FieldParams::prime(p).unwrap();
            let ctx = WittCtx::get(p, 3).unwrap();
            for _ in 0..500 {
                let u: Vec<FieldElem> = (0..3)
                    .map(|_| params.from_int(rng.gen_range(0..p) as i64))
                    .collect();
                let v: Vec<FieldElem> = (0..3)
                    .map(|_| params.from_int(rng.gen_range(0..p) as i64))
                    .collect();
                let w = ctx.sub(&v, &u).unwrap();
                let back = ctx.add(&u, &w).unwrap();
                assert_eq!(back, v);
            }
        }
    }

    #[test]
    fn witt_add_commutative_associative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let f3 = FieldParams::prime(3).unwrap();
        let ctx = WittCtx::get(3, 3).unwrap();
        for _ in 0..100 {
            let r = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<FieldElem> {
                (0..3).map(|_| f3.from_int(rng.gen_range(0..3))).collect()
            };
            let (a, b, c) = (r(&mut rng), r(&mut rng), r(&mut rng));
            let ab = ctx.add(&a, &b).unwrap();
            let ba = ctx.add(&b, &a).unwrap();
            assert_eq!(ab, ba);
            let abc1 = ctx.add(&ab, &c).unwrap();
            let bc = ctx.add(&b, &c).unwrap();
            let abc2 = ctx.add(&a, &bc).unwrap();
            assert_eq!(abc1, abc2);
        }
    }

    #[test]
    fn build_rhs_table1_head_and_checks() {
        // p=5, n=1, f = X^6 + X^4 + 2X^3 + X^2 + X: coordinate 0 is f itself
        let f5 = FieldParams::prime(5).unwrap();
        let ctx = WittCtx::get(5, 1).unwrap();
        let mut coeffs = BTreeMap::new();
        for (i, c) in [(6u32, 1i64), (4, 1), (3, 2), (2, 1), (1, 1)] {
            coeffs.insert(i, vec![f5.from_int(c)]);
        }
        let rhs = build_rhs(&f5, &ctx, &coeffs, 6).unwrap();
        let expect = PolyOverField::from_coeffs(
            &f5,
            &[0, 1, 1, 2, 1, 0, 1]
                .iter()
                .map(|&c| f5.from_int(c))
                .collect::<Vec<_>>(),
        );
        assert_eq!(rhs[0], expect);

        // p=2, n=2, c_1 = (1,0) -> (x, 0)
        let f2 = FieldParams::prime(2).unwrap();
        let ctx2 = WittCtx::get(2, 2).unwrap();
        let mut c1 = BTreeMap::new();
        c1.insert(1u32, vec![f2.one(), f2.zero()]);
        let rhs2 = build_rhs(&f2, &ctx2, &c1, 1).unwrap();
        assert_eq!(rhs2[0], PolyOverField::monomial(f2.one(), 1));
        assert!(rhs2[1].is_zero());

        // p=2, n=2, c_1 = c_3 = (1,0): coordinate 1 picks up the carry x^4
        let mut c13 = BTreeMap::new();
        c13.insert(1u32, vec![f2.one(), f2.zero()]);
        c13.insert(3u32, vec![f2.one(), f2.zero()]);
        let rhs3 = build_rhs(&f2, &ctx2, &c13, 3).unwrap();
        let x = PolyOverField::x(&f2);
        assert_eq!(rhs3[0], x.add(&x.pow(3)));
        assert_eq!(rhs3[1], x.pow(4));

        // rejections: exponent divisible by p, break violation
        let mut bad = BTreeMap::new();
        bad.insert(2u32, vec![f2.one()]);
        assert!(build_rhs(&f2, &ctx2, &bad, 3).is_err());
        let mut brk = BTreeMap::new();
        brk.insert(5u32, vec![f2.one(), f2.zero()]);
        assert!(
            build_rhs(&f2, &ctx2, &brk, 3).is_err(),
            "5 > d = 3 at j = 0"
        );
    }
}
