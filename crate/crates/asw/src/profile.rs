//! Integer and rational combinatorics of minimal-break-ratio towers.
//!
//! Everything here is a function of (p, d) alone: ramification breaks and
//! genus, the digit functions rev/xi, the jump function mu and its defining
//! oracle, lattice-point counts, cutoff parameters, the closed-form
//! a-number value with its error constant C(p,d,r), the exact r=1 formula
//! when d | (p-1), the floor-sum identity f_n, and the asymptotic ratios.
//! No curve arithmetic, no floating point; floors and ceilings are taken
//! on exact rationals.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn rat_int(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

fn floor_rat(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// A minimal-break-ratio tower profile: prime p and ramification invariant
/// d with p not dividing d. The n-th upper break is s_n = d p^(n-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerProfile {
    p: u64,
    d: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    /// Scan mu_i for 1 <= i <= N; N = 0 means the default d * p^4.
    Empirical(u64),
    /// The always-valid bound (d-1)/d.
    Safe,
}

/// Cutoff parameters entering the a-number formula, all exact.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffReport {
    pub r: u64,
    pub n: u32,
    /// delta = (r+1)p - (r-1)
    pub delta: u64,
    pub t_n: BigInt,
    pub t_prime_n: BigInt,
    pub s_n_rem: BigInt,
    pub lambda: BigRational,
    /// True when lambda came from the empirical scan rather than the safe bound.
    pub lambda_empirical: bool,
    pub d_t: BigRational,
    pub epsilon: BigRational,
    pub c_pdr: BigRational,
    pub exact: bool,
}

/// Lattice counts for Delta_n(t) = {(i,j) : i > t, mu_i <= j < p^n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeReport {
    pub n: u32,
    pub t: u64,
    /// #Delta_n(t)
    pub count_right: BigInt,
    /// #Delta_n = #Delta_n(0)
    pub count_total: BigInt,
}

impl LatticeReport {
    /// r(p-1)t(t+1)/(2d) + #Delta_n(t), the formula combination this count
    /// feeds into.
    pub fn formula_value(&self, profile: &TowerProfile, r: u64) -> BigRational {
        profile.triangle_term(r, &big(self.t as i64)) + rat_int(&self.count_right)
    }
}

/// The formula value F, the guaranteed lower bound F - C, and exactness.
#[derive(Debug, Clone, PartialEq)]
pub struct AnumberFormula {
    pub value: BigInt,
    pub lower: BigRational,
    pub exact: bool,
    pub cutoff: CutoffReport,
    /// The cutoff actually used for the lattice count (t'(n) when exact).
    pub t_used: BigInt,
}

impl TowerProfile {
    pub fn new(p: u64, d: u64) -> Result<Self> {
        let prime = p >= 2
            && (2..p)
                .take_while(|q| q * q <= p)
                .all(|q| !p.is_multiple_of(q));
        if !prime {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        if d == 0 || d.is_multiple_of(p) {
            return Err(Error::InvalidParams(format!(
                "ramification invariant d = {d} must be positive and prime to p = {p}"
            )));
        }
        Ok(TowerProfile { p, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    fn p_pow(&self, n: u32) -> BigInt {
        big(self.p as i64).pow(n)
    }

    /// (s_n, d_n, g_n): upper break, lower break, genus of level n.
    /// All divisibilities are asserted; a failure means invalid (p, d).
    pub fn breaks_and_genus(&self, n: u32) -> (BigInt, BigInt, BigInt) {
        assert!(n >= 1, "level must be >= 1");
        let p = big(self.p as i64);
        let d = big(self.d as i64);
        let s_n = &d * self.p_pow(n - 1);
        let d_n = self.lower_break(n);
        // 2 g_n = d (p^2n - 1)/(p+1) + 1 - p^n
        let num = &d * (self.p_pow(2 * n) - BigInt::one());
        let (q, rem) = Integer::div_rem(&num, &(&p + BigInt::one()));
        assert!(rem.is_zero(), "p+1 must divide d(p^2n - 1)");
        let twog = q + BigInt::one() - self.p_pow(n);
        let (g, rem2) = Integer::div_rem(&twog, &big(2));
        assert!(rem2.is_zero(), "genus must be integral");
        (s_n, d_n, g)
    }

    /// d_m = d (p^(2m-1) + 1)/(p+1).
    pub fn lower_break(&self, m: u32) -> BigInt {
        assert!(m >= 1);
        let p = big(self.p as i64);
        let d = big(self.d as i64);
        let num = &d * (self.p_pow(2 * m - 1) + BigInt::one());
        let (q, rem) = Integer::div_rem(&num, &(&p + BigInt::one()));
        assert!(rem.is_zero(), "p+1 must divide d(p^(2m-1) + 1)");
        q
    }

    pub fn genus(&self, n: u32) -> BigInt {
        self.breaks_and_genus(n).2
    }

    /// Base-p digits of a, least significant first.
    fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut v = vec![];
        while a > 0 {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    /// rev(a) = sum a_m p^(-m-1): the digits of a pushed past the radix point.
    pub fn rev(&self, a: u64) -> BigRational {
        let mut acc = BigRational::zero();
        let mut pw = rat(1, self.p as i64);
        for dig in self.digits(a) {
            acc += rat(dig as i64, 1) * &pw;
            pw *= rat(1, self.p as i64);
        }
        acc
    }

    /// xi_a = (d/(p+1)) (a + rev(a)); also the digit-weighted sum
    /// sum_m p^(-m-1) a_m d_(m+1). Both routes are computed in exact scaled
    /// integer arithmetic and must agree.
    pub fn xi(&self, a: u64) -> BigRational {
        let (num, scale) = self.xi_scaled_u128(a);
        BigRational::new(BigInt::from(num), BigInt::from(scale))
    }

    /// xi_a as an exact fraction num / p^len(a); u128 exact for the
    /// supported ranges.
    fn xi_scaled_u128(&self, a: u64) -> (u128, u128) {
        let p = self.p as u128;
        let d = self.d as u128;
        let digits = self.digits(a);
        let len = digits.len().max(1);
        let mut scale: u128 = 1;
        for _ in 0..len {
            scale = scale.checked_mul(p).expect("xi scale overflow");
        }
        // weighted route: sum a_m d_(m+1) p^(len-m-1), with the break
        // recurrence d_(m+1) = p^2 d_m - d (p - 1)
        let mut weighted: u128 = 0;
        let mut d_m1: u128 = d; // d_1
        let mut pw: u128 = scale / p; // p^(len-1)
        let mut rev_scaled: u128 = 0;
        for &dig in digits.iter() {
            if dig != 0 {
                weighted += dig as u128 * d_m1 * pw;
                rev_scaled += dig as u128 * pw;
            }
            d_m1 = p * p * d_m1 - d * (p - 1);
            pw /= p;
        }
        // direct route: d (a + rev(a)) / (p+1), scaled by p^len
        let direct_num = d
            .checked_mul(a as u128 * scale + rev_scaled)
            .expect("xi overflow");
        assert_eq!(
            direct_num,
            (p + 1) * weighted,
            "xi formulas disagree at a = {a}"
        );
        (weighted, scale)
    }

    /// Oracle values mu_0..mu_n in one monotone sweep (mu is nondecreasing,
    /// so a single pass over b suffices). xi is advanced by the increment
    /// xi_b - xi_(b-1) = d p^(-v_p(b)-1) in scaled integer arithmetic and
    /// spot-checked against the closed form along the way.
    pub fn mu_oracle_upto(&self, n: u64) -> Vec<u64> {
        let p = self.p as u128;
        let d = self.d as u128;
        let b_max = (p + 1) * (n as u128 + 1) / d + 2;
        let mut scale: u128 = p;
        while scale <= b_max {
            scale = scale.checked_mul(p).expect("scale overflow");
        }
        scale = scale.checked_mul(scale).expect("scale overflow"); // headroom for p^(-m-1) increments
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut b: u64 = 1;
        let mut xi_scaled: u128 = d * (scale / p); // xi_1 = d/p
        for i in 0..=n {
            let target = i as u128 * scale;
            while xi_scaled <= target {
                b += 1;
                let mut m = 0u32;
                let mut bb = b;
                while bb.is_multiple_of(self.p) {
                    bb /= self.p;
                    m += 1;
                }
                let mut pw = scale / p;
                for _ in 0..m {
                    pw /= p;
                }
                xi_scaled += d * pw;
            }
            out.push(b);
            if i % 1024 == 0 {
                let (num, sc) = self.xi_scaled_u128(b);
                assert_eq!(
                    num * (scale / sc),
                    xi_scaled,
                    "xi increment drifted at b = {b}"
                );
            }
        }
        out
    }

    /// mu_i by the digit-comparison closed form; mu_0 = 1. Must agree with
    /// [`TowerProfile::mu_oracle`] everywhere (tested, not re-checked here).
    pub fn mu(&self, i: u64) -> u64 {
        if i == 0 {
            return 1;
        }
        let p = self.p as u128;
        let num = (self.p as u128 + 1) * i as u128;
        let den = self.d as u128;
        let n_floor = num / den;
        let frac0 = num % den;
        // integer digits of n_floor, least significant first
        let mut int_digits = vec![];
        let mut v = n_floor;
        while v > 0 {
            int_digits.push((v % p) as u64);
            v /= p;
        }
        // stream comparison: (j_m)_{m>=0} vs (j_{-1-m})_{m>=0}
        let mut r = frac0;
        let cap = int_digits.len() as u128 + den + 64;
        let mut m: u128 = 0;
        while (m as usize) < int_digits.len() || r != 0 {
            let a = int_digits.get(m as usize).copied().unwrap_or(0);
            let b = ((r * p) / den) as u64;
            r = (r * p) % den;
            if a > b {
                return n_floor as u64; // floor branch
            }
            if a < b {
                return n_floor as u64 + 1; // ceiling branch
            }
            m += 1;
            assert!(m <= cap, "digit comparison failed to terminate");
        }
        // streams identical: the strict-dominance test fails, so ceiling
        n_floor as u64 + if frac0 != 0 { 1 } else { 0 }
    }

    /// The defining oracle: min { b >= 1 : xi_b > i }.
    pub fn mu_oracle(&self, i: u64) -> u64 {
        let target = rat(i as i64, 1);
        let mut b = 1u64;
        loop {
            if self.xi(b) > target {
                return b;
            }
            b += 1;
            assert!(
                b <= (self.p + 1) * (i + 1) / self.d + 2,
                "mu oracle overran its bound"
            );
        }
    }

    /// #Delta_n(t) and #Delta_n by column sums: sum_{i>t} max(0, p^n - mu_i),
    /// terminating once mu_i >= p^n.
    pub fn lattice_counts(&self, n: u32, t: u64) -> Result<LatticeReport> {
        let pn_big = self.p_pow(n);
        let pn = pn_big
            .to_u64()
            .filter(|&v| v <= (1u64 << 52))
            .ok_or_else(|| {
                Error::Truncation(format!(
                    "p^{n} too large for lattice enumeration; use the closed form"
                ))
            })?;
        let mut right = BigInt::zero();
        let mut total = BigInt::zero();
        let mut i = 1u64;
        loop {
            let mu = self.mu(i);
            if mu >= pn {
                break;
            }
            let contrib = big((pn - mu) as i64);
            total += &contrib;
            if i > t {
                right += &contrib;
            }
            i += 1;
        }
        Ok(LatticeReport {
            n,
            t,
            count_right: right,
            count_total: total,
        })
    }

    /// The triangular term r(p-1)t(t+1)/(2d) of the a-number formula.
    pub fn triangle_term(&self, r: u64, t: &BigInt) -> BigRational {
        rat(r as i64, 1)
            * rat(self.p as i64 - 1, 1)
            * rat_int(t)
            * (rat_int(t) + BigRational::one())
            / rat(2 * self.d as i64, 1)
    }

    /// lambda = max_i |mu_i - (p+1)i/d|, either by empirical scan or the
    /// safe bound (d-1)/d. The value always lies in (1/d)Z and is < 1.
    pub fn lambda(&self, mode: LambdaMode) -> (BigRational, bool) {
        match mode {
            LambdaMode::Safe => (rat(self.d as i64 - 1, self.d as i64), false),
            LambdaMode::Empirical(n) => {
                let n = if n == 0 { self.d * self.p.pow(4) } else { n };
                // |mu_i - (p+1)i/d| = |mu_i d - (p+1) i| / d: track the
                // integer numerator.
                let mut best: u128 = 0;
                for i in 1..=n {
                    let mu = self.mu(i) as u128;
                    let lhs = mu * self.d as u128;
                    let rhs = (self.p as u128 + 1) * i as u128;
                    let diff = lhs.abs_diff(rhs);
                    best = best.max(diff);
                }
                (
                    BigRational::new(BigInt::from(best), big(self.d as i64)),
                    true,
                )
            }
        }
    }

    /// All cutoff parameters for (r, n): delta, t(n), t'(n), s(n), lambda,
    /// D_t, epsilon, C(p,d,r), and the exactness flag.
    pub fn cutoff_report(&self, r: u64, n: u32, mode: LambdaMode) -> CutoffReport {
        assert!(r >= 1 && n >= 1);
        let p = self.p;
        let d = self.d;
        let delta = (r + 1) * p - (r - 1);
        let pn = self.p_pow(n);
        let delta_b = big(delta as i64);
        let d_b = big(d as i64);
        let t_n = &d_b * ((&pn - BigInt::one()) / &delta_b);
        let t_prime_n = (&d_b * &pn) / &delta_b;
        let s_n = &pn - BigInt::one() - (&t_n * &delta_b) / &d_b;
        assert!(s_n >= BigInt::zero() && s_n < delta_b, "s(n) out of range");
        assert!((&t_n % &d_b).is_zero(), "t(n) must be a multiple of d");
        let (lambda, lambda_empirical) = self.lambda(mode);
        // D_t = max{1, p^n - t(n) delta/d - (r(p-1)+1)/d + 1 - lambda}
        let t_delta_over_d = rat_int(&(&t_n * &delta_b)) / rat(d as i64, 1);
        let dt_raw = rat_int(&pn) - t_delta_over_d - rat((r * (p - 1) + 1) as i64, d as i64)
            + BigRational::one()
            - lambda.clone();
        let d_t = if dt_raw > BigRational::one() {
            dt_raw
        } else {
            BigRational::one()
        };
        let epsilon =
            d_t.clone() - BigRational::one() + rat(2, 1) * lambda.clone() - rat(p as i64, d as i64);
        let c_pdr = if epsilon.is_positive() {
            let fl = floor_rat(&(rat(d as i64, p as i64) * epsilon.clone()));
            (BigRational::one() + rat_int(&fl))
                * (epsilon.clone() - rat(p as i64, 2 * d as i64) * rat_int(&fl))
        } else {
            BigRational::zero()
        };
        assert!(!c_pdr.is_negative(), "C(p,d,r) must be nonnegative");
        let exact = (p - 1).is_multiple_of(d)
            || (d <= p + 1 && rat_int(&s_n) < rat(delta as i64, d as i64) - BigRational::one());
        CutoffReport {
            r,
            n,
            delta,
            t_n,
            t_prime_n,
            s_n_rem: s_n,
            lambda,
            lambda_empirical,
            d_t,
            epsilon,
            c_pdr,
            exact,
        }
    }

    /// The a-number formula: F = r(p-1)t(t+1)/(2d) + #Delta_n(t), with
    /// t = t'(n) in the exact cases and t = t(n) otherwise. Returns F, the
    /// sandwich lower bound F - C(p,d,r), and the exactness flag.
    pub fn anumber_formula(&self, r: u64, n: u32, mode: LambdaMode) -> Result<AnumberFormula> {
        let cutoff = self.cutoff_report(r, n, mode);
        let t_used = if cutoff.exact {
            cutoff.t_prime_n.clone()
        } else {
            cutoff.t_n.clone()
        };
        let value = match self.formula_value_at(r, n, &t_used) {
            Ok(v) => v,
            Err(e) => {
                // Enumeration out of reach; the exact r=1 closed form still
                // applies when d | (p-1).
                if cutoff.exact && r == 1 && self.p > 2 && (self.p - 1).is_multiple_of(self.d) {
                    self.anumber_exact_r1(n)?
                } else {
                    return Err(e);
                }
            }
        };
        let lower = rat_int(&value) - cutoff.c_pdr.clone();
        Ok(AnumberFormula {
            value,
            lower,
            exact: cutoff.exact,
            cutoff,
            t_used,
        })
    }

    /// F evaluated at an explicit cutoff t.
    pub fn formula_value_at(&self, r: u64, n: u32, t: &BigInt) -> Result<BigInt> {
        let t_u64 = t
            .to_u64()
            .ok_or_else(|| Error::Truncation("cutoff too large for enumeration".into()))?;
        let lattice = self.lattice_counts(n, t_u64)?;
        let tri = self.triangle_term(r, t);
        assert!(tri.is_integer(), "triangular term must be integral");
        Ok(tri.to_integer() + lattice.count_right)
    }

    /// Exact classical a-number for r = 1, p > 2, d | (p-1):
    /// ((p-1)/2) (d/(2(p+1))) (p^(2n-1)+1), minus (p-1)/(4d) when d is odd.
    pub fn anumber_exact_r1(&self, n: u32) -> Result<BigInt> {
        let p = self.p;
        let d = self.d;
        if p <= 2 || !(p - 1).is_multiple_of(d) {
            return Err(Error::InvalidParams(
                "exact r=1 formula requires p > 2 and d | (p-1)".into(),
            ));
        }
        let main = rat(p as i64 - 1, 2)
            * rat(d as i64, 2 * (p as i64 + 1))
            * rat_int(&(self.p_pow(2 * n - 1) + BigInt::one()));
        let corr = if d.is_multiple_of(2) {
            BigRational::zero()
        } else {
            rat(p as i64 - 1, 4 * d as i64)
        };
        let v = main - corr;
        if !v.is_integer() {
            return Err(Error::internal(format!(
                "exact a-number formula produced non-integer {v} at p={p}, d={d}, n={n}"
            )));
        }
        Ok(v.to_integer())
    }

    /// Closed form for f_n(x) = sum_{b < p^n} floor(x + xi_b).
    pub fn fn_closed(&self, n: u32, x: &BigRational) -> BigInt {
        let p = big(self.p as i64);
        let d = big(self.d as i64);
        let pn = self.p_pow(n);
        let pn1 = self.p_pow(n - 1);
        let lead = rat_int(&(&d * &p * (&pn - BigInt::one()) * (&pn1 - BigInt::one())))
            / rat_int(&(big(2) * (&p + BigInt::one())));
        let mid = rat_int(&((&d - BigInt::one()) * (&pn - BigInt::one()))) / rat(2, 1);
        let tail = floor_rat(&(rat_int(&pn) * x.clone()));
        let total = lead + mid + rat_int(&tail);
        assert!(total.is_integer(), "f_n closed form must be integral");
        total.to_integer()
    }

    /// Brute-force oracle for f_n.
    pub fn fn_bruteforce(&self, n: u32, x: &BigRational) -> BigInt {
        let pn = self.p_pow(n).to_u64().expect("p^n fits u64 for the oracle");
        let mut acc = BigInt::zero();
        for b in 0..pn {
            acc += floor_rat(&(x.clone() + self.xi(b)));
        }
        acc
    }

    /// lim a_n^(r) / g_n = r / (r + (p+1)/(p-1)).
    pub fn asymptotic_ratio(&self, r: u64) -> BigRational {
        let tau = rat(self.p as i64 + 1, self.p as i64 - 1);
        rat(r as i64, 1) / (rat(r as i64, 1) + tau)
    }

    /// lim m_n(i) / g_n = 2 tau / ((i+tau)^3 - (i+tau)), tau = (p+1)/(p-1).
    pub fn m_density(&self, i: u64) -> BigRational {
        let tau = rat(self.p as i64 + 1, self.p as i64 - 1);
        let s = rat(i as i64, 1) + tau.clone();
        rat(2, 1) * tau / (s.clone() * s.clone() * s.clone() - s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(p: u64, d: u64) -> TowerProfile {
        TowerProfile::new(p, d).unwrap()
    }

    #[test]
    fn breaks_and_genus_examples() {
        let pr = profile(5, 4);
        let (s, dn, g) = pr.breaks_and_genus(2);
        assert_eq!((s, dn, g), (big(20), big(84), big(196)));
        let pr6 = profile(5, 6);
        assert_eq!(pr6.breaks_and_genus(2), (big(30), big(126), big(300)));
        let pr21 = profile(2, 1);
        assert_eq!(pr21.breaks_and_genus(1), (big(1), big(1), big(0)));
    }

    #[test]
    fn invalid_profiles_rejected() {
        assert!(TowerProfile::new(4, 1).is_err());
        assert!(TowerProfile::new(5, 10).is_err());
        assert!(TowerProfile::new(5, 0).is_err());
    }

    #[test]
    fn xi_examples() {
        let pr = profile(3, 2);
        assert_eq!(pr.xi(5), rat(26, 9));
        assert_eq!(pr.xi(0), rat(0, 1));
        let pr54 = profile(5, 4);
        assert_eq!(pr54.xi(4), rat(16, 5));
    }

    #[test]
    fn rev_reverses_digits() {
        let pr = profile(3, 2);
        // 5 = (2, 1) base 3: rev = 2/3 + 1/9 = 7/9
        assert_eq!(pr.rev(5), rat(7, 9));
        // xi_a = (d/(p+1)) (a + rev(a))
        for a in 0..200u64 {
            let direct = rat(2, 4) * (rat(a as i64, 1) + pr.rev(a));
            assert_eq!(pr.xi(a), direct);
        }
    }

    #[test]
    fn xi_monotone() {
        for (p, d) in [(2, 3), (3, 2), (5, 4), (5, 6), (7, 5)] {
            let pr = profile(p, d);
            let mut prev = pr.xi(0);
            for a in 1..=10_000u64 {
                let cur = pr.xi(a);
                assert!(cur > prev, "xi not increasing at a={a} for p={p}, d={d}");
                prev = cur;
            }
        }
    }

    #[test]
    fn mu_examples() {
        let pr = profile(5, 4);
        assert_eq!(pr.mu(3), 4);
        assert_eq!(pr.mu(1), 2);
        let pr56 = profile(5, 6);
        assert_eq!(pr56.mu(7), 7); // d | (p+1): mu_j = (p+1)j/d = j
        assert_eq!(pr.mu(0), 1);
    }

    #[test]
    fn mu_matches_oracle_on_small_grid() {
        for (p, d) in [(2, 1), (2, 3), (3, 2), (3, 4), (5, 4), (5, 6), (7, 3)] {
            let pr = profile(p, d);
            for i in 0..500u64 {
                assert_eq!(
                    pr.mu(i),
                    pr.mu_oracle(i),
                    "mu mismatch at i={i}, p={p}, d={d}"
                );
            }
        }
    }

    #[test]
    fn mu_bounds() {
        for (p, d) in [(2, 3), (3, 2), (5, 4), (5, 6), (7, 5)] {
            let pr = profile(p, d);
            for i in 1..2000u64 {
                let mu = pr.mu(i);
                // mu_i > (p/d) i
                assert!(mu as u128 * d as u128 > p as u128 * i as u128);
                // |mu_i - (p+1)i/d| < 1
                let lhs = mu as i128 * d as i128 - (p as i128 + 1) * i as i128;
                assert!(lhs.unsigned_abs() < d as u128);
                if (p + 1) % d == 0 {
                    assert_eq!(mu as u128 * d as u128, (p as u128 + 1) * i as u128);
                }
            }
        }
    }

    #[test]
    fn lattice_count_examples() {
        let pr = profile(5, 6);
        let rep = pr.lattice_counts(2, 6).unwrap();
        assert_eq!(rep.count_right, big(171));
        assert_eq!(rep.count_total, big(300));
        assert_eq!(rep.count_total, pr.genus(2));
        assert_eq!(rep.formula_value(&pr, 3), rat(213, 1));
        // beyond the support the count is empty
        let far = pr.lattice_counts(2, 30).unwrap();
        assert_eq!(far.count_right, big(0));
    }

    #[test]
    fn genus_lattice_identity() {
        for (p, d) in [(2, 1), (2, 3), (3, 2), (3, 4), (5, 4), (5, 6)] {
            let pr = profile(p, d);
            for n in 1..=4u32 {
                let rep = pr.lattice_counts(n, 0).unwrap();
                assert_eq!(rep.count_total, pr.genus(n), "p={p} d={d} n={n}");
            }
        }
    }

    #[test]
    fn cutoff_report_table_case() {
        let pr = profile(5, 6);
        let rep = pr.cutoff_report(3, 2, LambdaMode::Empirical(0));
        assert_eq!(rep.delta, 18);
        assert_eq!(rep.t_n, big(6));
        assert_eq!(rep.s_n_rem, big(6));
        assert_eq!(rep.lambda, rat(0, 1));
        assert_eq!(rep.d_t, rat(35, 6));
        assert_eq!(rep.epsilon, rat(4, 1));
        assert_eq!(rep.c_pdr, rat(35, 3));
        assert!(!rep.exact);
    }

    #[test]
    fn cutoff_t_prime_examples() {
        let pr = profile(5, 4);
        let rep = pr.cutoff_report(3, 2, LambdaMode::Empirical(0));
        assert_eq!(rep.t_prime_n, big(5));
        let rep1 = pr.cutoff_report(1, 2, LambdaMode::Empirical(0));
        assert!(rep1.exact);
        assert_eq!(rep1.t_prime_n, big(10));
        assert_eq!(rep1.delta, 10);
    }

    #[test]
    fn t_window() {
        for (p, d) in [(2, 3), (3, 2), (5, 4), (5, 6), (7, 5)] {
            let pr = profile(p, d);
            for r in 1..=4u64 {
                for n in 1..=4u32 {
                    let rep = pr.cutoff_report(r, n, LambdaMode::Safe);
                    assert!(rep.t_n <= rep.t_prime_n);
                    // t' <= t + d in general; for odd p the gap is < d
                    let gap = if p == 2 { d as i64 } else { d as i64 - 1 };
                    assert!(rep.t_prime_n <= &rep.t_n + big(gap));
                }
            }
        }
    }

    #[test]
    fn anumber_formula_examples() {
        let pr56 = profile(5, 6);
        let f = pr56
            .anumber_formula(3, 2, LambdaMode::Empirical(0))
            .unwrap();
        assert_eq!(f.value, big(213));
        assert_eq!(f.cutoff.c_pdr, rat(35, 3));
        assert!(!f.exact);

        let pr54 = profile(5, 4);
        for (n, expect) in [(1u32, 4i64), (2, 84), (3, 2084), (4, 52084)] {
            let f = pr54
                .anumber_formula(1, n, LambdaMode::Empirical(0))
                .unwrap();
            assert!(f.exact);
            assert_eq!(f.value, big(expect), "n = {n}");
            assert_eq!(pr54.anumber_exact_r1(n).unwrap(), big(expect));
        }
    }

    #[test]
    fn exact_r1_small_cases() {
        assert_eq!(profile(3, 2).anumber_exact_r1(1).unwrap(), big(1));
        assert_eq!(profile(7, 6).anumber_exact_r1(1).unwrap(), big(9));
        assert!(profile(5, 3).anumber_exact_r1(1).is_err());
    }

    #[test]
    fn exact_r1_matches_formula_branch() {
        for (p, d) in [(3, 2), (5, 2), (5, 4), (7, 2), (7, 3), (7, 6)] {
            let pr = profile(p, d);
            for n in 1..=3u32 {
                let f = pr.anumber_formula(1, n, LambdaMode::Empirical(0)).unwrap();
                assert!(f.exact);
                assert_eq!(
                    f.value,
                    pr.anumber_exact_r1(n).unwrap(),
                    "p={p} d={d} n={n}"
                );
            }
        }
    }

    #[test]
    fn fn_identity_examples() {
        let pr32 = profile(3, 2);
        assert_eq!(pr32.fn_closed(1, &rat(0, 1)), big(1));
        assert_eq!(pr32.fn_bruteforce(1, &rat(0, 1)), big(1));
        let pr54 = profile(5, 4);
        assert_eq!(pr54.fn_closed(2, &rat(0, 1)), big(196));
        // f_n(x+1) - f_n(x) = p^n
        let x = rat(3, 7);
        assert_eq!(
            pr54.fn_closed(2, &(x.clone() + BigRational::one())) - pr54.fn_closed(2, &x),
            big(25)
        );
    }

    #[test]
    fn fn_closed_equals_bruteforce() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (p, d) in [(2, 3), (3, 2), (3, 4), (5, 4), (5, 6)] {
            let pr = profile(p, d);
            for n in 1..=3u32 {
                for _ in 0..20 {
                    let num = rng.gen_range(-50..50i64);
                    let den = rng.gen_range(1..20i64);
                    let x = rat(num, den);
                    assert_eq!(
                        pr.fn_closed(n, &x),
                        pr.fn_bruteforce(n, &x),
                        "p={p} d={d} n={n} x={x}"
                    );
                }
                assert_eq!(pr.fn_closed(n, &rat(0, 1)), pr.genus(n));
            }
        }
    }

    #[test]
    fn asymptotics_examples() {
        let pr = profile(5, 4);
        assert_eq!(pr.asymptotic_ratio(1), rat(2, 5));
        assert_eq!(pr.m_density(1), rat(8, 35));
        for r in 1..50u64 {
            assert!(pr.asymptotic_ratio(r) < BigRational::one());
        }
    }
}
