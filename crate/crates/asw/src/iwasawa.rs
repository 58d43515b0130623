//! The Galois/T-action on the coordinate rings, trace maps between levels,
//! and executable verification of the structural facts the rest of the
//! crate leans on: T^a y^a is the unit prod a_i!, T is triangular with
//! controlled degrees, traces carry w_a^(n+1) to w_a^(n), and the regular
//! differentials decompose as a k[T]/(T^(p^n))-module with generators
//! e_i = x^i w_{mu_i} dx/x.
//!
//! The verifications return pass/fail reports rather than asserting, so a
//! single discrepancy does not abort a sweep.

use crate::cartier::{diff_coordinates, regular_basis, Diff};
use crate::error::Result;
use crate::field::FieldElem;
use crate::func::FuncElem;
use crate::matrix::SemilinMatrix;
use crate::tower::Tower;
use num_traits::ToPrimitive;

/// gamma applied to a reduced element (fixes k[x], y_i to the transported
/// image recorded during construction).
pub fn galois_gamma(tower: &Tower, e: &FuncElem) -> FuncElem {
    tower.gamma(e)
}

/// T = gamma - 1.
pub fn t_act(tower: &Tower, e: &FuncElem) -> FuncElem {
    tower.t_act(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            items: vec![],
        }
    }

    fn push(&mut self, label: String, pass: bool, detail: String) {
        self.items.push(CheckItem {
            label,
            pass,
            detail,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}

fn base_p_digits(mut a: u64, p: u64) -> Vec<u64> {
    let mut v = vec![];
    while a > 0 {
        v.push(a % p);
        a /= p;
    }
    v
}

/// T^a(y^a) = prod_i (a_i)! in F_p, for all 0 < a < p^n.
pub fn verify_taunit(tower: &Tower, n: usize) -> CheckReport {
    let p = tower.p();
    let pn = p.pow(n as u32);
    let mut report = CheckReport::new("taunit");
    for a in 1..pn {
        let mut e = FuncElem::monomial(tower.params(), n, a as u32, 0, tower.params().one());
        for _ in 0..a {
            e = tower.t_act(&e);
        }
        let mut expect: u64 = 1;
        for d in base_p_digits(a, p) {
            for f in 1..=d {
                expect = (expect * f) % p;
            }
        }
        let expected = FuncElem::constant(tower.params().from_int(expect as i64), n);
        report.push(
            format!("T^{a} y^{a}"),
            e == expected,
            format!("got {e}, expected {expect}"),
        );
    }
    report
}

/// T(y^a) = (-1)^m a_m y^(a-1) + sum_{b<a-1} g_b y^b with
/// deg g_b <= (a-1-b) d/p, m = v_p(a).
pub fn verify_t_triangular(tower: &Tower, n: usize) -> CheckReport {
    let p = tower.p();
    let d = tower.d();
    let pn = p.pow(n as u32);
    let mut report = CheckReport::new("triangular");
    for a in 1..pn {
        let e = FuncElem::monomial(tower.params(), n, a as u32, 0, tower.params().one());
        let te = tower.t_act(&e);
        let coeffs = te.y_coefficients();
        // no terms at or above y^a
        let stray = coeffs.keys().any(|&b| b as u64 >= a);
        // leading coefficient at y^(a-1)
        let m = a.trailing_zeros_base_p(p);
        let a_m = (a / p.pow(m)) % p;
        let sign = if m % 2 == 0 { 1i64 } else { -1 };
        let expect_lead = tower.params().from_int(sign * a_m as i64);
        let lead_ok = match coeffs.get(&((a - 1) as u32)) {
            Some(poly) => poly.degree() == Some(0) && poly.coeff(0) == expect_lead,
            None => expect_lead.is_zero(),
        };
        // degree bounds below the leading term
        let mut deg_ok = true;
        for (&b, poly) in &coeffs {
            if (b as u64) < a - 1 {
                if let Some(deg) = poly.degree() {
                    // deg g_b <= (a-1-b) d / p
                    if (deg as u64) * p > (a - 1 - b as u64) * d {
                        deg_ok = false;
                    }
                }
            }
        }
        report.push(
            format!("T y^{a}"),
            !stray && lead_ok && deg_ok,
            format!("stray={stray} lead_ok={lead_ok} deg_ok={deg_ok} (expect lead {expect_lead})"),
        );
    }
    report
}

trait TrailingZerosBaseP {
    fn trailing_zeros_base_p(self, p: u64) -> u32;
}

impl TrailingZerosBaseP for u64 {
    fn trailing_zeros_base_p(self, p: u64) -> u32 {
        let mut a = self;
        let mut m = 0;
        while a.is_multiple_of(p) {
            a /= p;
            m += 1;
        }
        m
    }
}

/// The trace R_{n+1} -> R_n: R_n-linear, y_n^i -> 0 for i < p-1 and
/// y_n^(p-1) -> -1.
pub fn trace_down(tower: &Tower, e: &FuncElem) -> FuncElem {
    let p = tower.p() as usize;
    let parts = e.split_top_variable();
    parts[p - 1].neg()
}

/// pi_*(w_a^(n+1)) = w_a^(n) for all a < p^(n+1); needs n+1 built levels.
pub fn verify_trace(tower: &Tower, n: usize) -> CheckReport {
    let p = tower.p();
    let mut report = CheckReport::new("trace");
    let upper = p.pow(n as u32 + 1);
    for a in 0..upper {
        let w_up = tower.w_elem(n + 1, a as u32);
        let got = trace_down(tower, &w_up);
        let expect = tower.w_elem(n, a as u32);
        report.push(
            format!("pi_* w_{a}^({})", n + 1),
            got == expect,
            format!("got {got}, expected {expect}"),
        );
    }
    report
}

/// Structure of M_n as a k[T]/(T^(p^n))-module: dimension count against
/// the lattice/genus identity, regularity and joint independence of the
/// generators e_i = x^i w_(mu_i) dx/x with their T-iterates, and the
/// empirical annihilator exponent of each generator.
pub fn verify_module_structure(tower: &Tower, n: usize) -> Result<CheckReport> {
    let p = tower.p();
    let pn = p.pow(n as u32);
    let profile = tower.profile();
    let mut report = CheckReport::new("module");

    // i(n): largest i with mu_i < p^n
    let mut i_n = 0u64;
    while profile.mu(i_n + 1) < pn {
        i_n += 1;
    }
    let dim_sum: u64 = (1..=i_n).map(|i| pn - profile.mu(i)).sum();
    let genus = profile.genus(n as u32).to_u64().unwrap();
    let lattice = profile.lattice_counts(n as u32, 0)?;
    report.push(
        "dimension count".into(),
        dim_sum == genus && lattice.count_total.to_u64() == Some(genus),
        format!(
            "sum (p^n - mu_i) = {dim_sum}, #Delta_n = {}, genus = {genus}",
            lattice.count_total
        ),
    );

    let basis = regular_basis(tower, n)?;
    let mut vectors: Vec<Vec<(usize, FieldElem)>> = vec![];
    let mut all_regular = true;
    for i in 1..=i_n {
        let mu = profile.mu(i);
        // e_i = x^i w_(mu_i) dx/x = x^(i-1) w_(mu_i) dx
        let w = tower.w_elem(n, mu as u32);
        let mut body = w.scale_x(&tower.params().one(), (i - 1) as u32);
        // iterates T^j e_i for 0 <= j <= p^n - 1 - mu_i
        let top = pn - 1 - mu;
        for j in 0..=top {
            let omega = Diff::new(body.clone());
            match diff_coordinates(tower, &basis, &omega) {
                Ok(coords) => vectors.push(coords),
                Err(e) => {
                    all_regular = false;
                    report.push(format!("T^{j} e_{i} regular"), false, format!("{e}"));
                }
            }
            if j < top {
                body = tower.t_act(&body);
            }
        }
        // annihilator exponents: T^(p^n - mu_i) e_i = 0 in M_n while
        // T^(p^n - 1 - mu_i) e_i != 0
        let last_nonzero = !body.is_zero();
        let killed = tower.t_act(&body).is_zero();
        report.push(
            format!("annihilator of e_{i}"),
            last_nonzero && killed,
            format!(
                "T^{} e_{i} {}, T^{} e_{i} {}: data supports annihilator T^(p^n - mu_i)",
                top,
                if last_nonzero { "nonzero" } else { "zero" },
                top + 1,
                if killed { "zero" } else { "nonzero" },
            ),
        );
    }
    report.push(
        "generators regular".into(),
        all_regular,
        "every T^j e_i lies in M_n".into(),
    );

    // joint independence: the T^j e_i coordinates must have full rank g_n
    let mut mat = SemilinMatrix::zeros(tower.params(), basis.len(), vectors.len(), 0);
    for (col, coords) in vectors.iter().enumerate() {
        for (row, c) in coords {
            mat.set(*row, col, c);
        }
    }
    let rank = mat.rank();
    report.push(
        "T-iterates independent".into(),
        vectors.len() == genus as usize && rank == genus as usize,
        format!("{} iterates, rank {rank}, genus {genus}", vectors.len()),
    );
    Ok(report)
}
