//! Browser demo: three interactive entry points compiled to WebAssembly.
//!
//! Each function returns a JSON string consumed by the static page in
//! `static/index.html`; errors come back as `{"error": "..."}` rather than
//! panics so the page can surface them.
//!
//! Build with `wasm-pack build --target web crates/asw-demo` (or
//! `cargo build --target wasm32-unknown-unknown -p asw-demo` plus
//! `wasm-bindgen`), then serve `static/`.

use asw::cartier::higher_anumbers;
use asw::lfun::{
    compare_np_hp, euler_fredholm_agreement, fredholm_coefficients, fredholm_newton_polygon,
    frobenius_alpha, hodge_eta, nuclear_matrix,
};
use asw::profile::{LambdaMode, TowerProfile};
use asw::tower::TowerSpec;
use asw::Tower;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn err_json(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

/// The combinatorial formula layer: cutoff parameters, the value F with its
/// error constant, and the asymptotic ratio, for interactive (p, d, r, n).
#[wasm_bindgen]
pub fn formula_report(p: u64, d: u64, r: u64, n: u32, safe_lambda: bool) -> String {
    let mode = if safe_lambda {
        LambdaMode::Safe
    } else {
        LambdaMode::Empirical(0)
    };
    let inner = || -> Result<Value, asw::Error> {
        let profile = TowerProfile::new(p, d)?;
        if r < 1 || n < 1 {
            return Err(asw::Error::InvalidParams("r, n must be positive".into()));
        }
        let f = profile.anumber_formula(r, n, mode)?;
        let (s_n, d_n, g_n) = profile.breaks_and_genus(n);
        Ok(json!({
            "delta": f.cutoff.delta,
            "t_n": f.cutoff.t_n.to_string(),
            "t_prime_n": f.cutoff.t_prime_n.to_string(),
            "s_n": f.cutoff.s_n_rem.to_string(),
            "lambda": f.cutoff.lambda.to_string(),
            "d_t": f.cutoff.d_t.to_string(),
            "epsilon": f.cutoff.epsilon.to_string(),
            "c_pdr": f.cutoff.c_pdr.to_string(),
            "exact": f.exact,
            "t_used": f.t_used.to_string(),
            "value": f.value.to_string(),
            "lower_bound": f.lower.to_string(),
            "upper_break": s_n.to_string(),
            "lower_break": d_n.to_string(),
            "genus": g_n.to_string(),
            "asymptotic_ratio": profile.asymptotic_ratio(r).to_string(),
            "ratio_float": rational_float(&profile.asymptotic_ratio(r)),
        }))
    };
    match inner() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

fn rational_float(r: &num_rational::BigRational) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::NAN);
    num / den
}

/// Build a tower from spec text and compute a_n^(1..r_max) with the k[V]
/// multiplicities, at the tower's top level.
#[wasm_bindgen]
pub fn tower_anumbers(spec_text: &str, r_max: u32) -> String {
    let inner = || -> Result<Value, asw::Error> {
        let spec = TowerSpec::parse(spec_text)?;
        if spec.levels > 2 {
            return Err(asw::Error::InvalidParams(
                "demo is capped at two levels; use the CLI for more".into(),
            ));
        }
        let tw = Tower::build(&spec)?;
        let n = tw.levels();
        let (a, prof) = higher_anumbers(&tw, n, r_max.clamp(1, 8))?;
        let f = tw
            .profile()
            .anumber_formula(1, n as u32, LambdaMode::Empirical(0))?;
        Ok(json!({
            "p": tw.p(),
            "d": tw.d(),
            "n": n,
            "genus": prof.genus,
            "a_numbers": a,
            "multiplicities": prof.multiplicities,
            "nilpotency_index": prof.nilpotency_index,
            "formula_r1": f.value.to_string(),
            "formula_exact": f.exact,
        }))
    };
    match inner() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

/// Newton polygon of the truncated Fredholm determinant against HP(d),
/// with everything the page needs to draw both polygons.
#[wasm_bindgen]
pub fn newton_hodge(spec_text: &str, t: u32) -> String {
    let inner = || -> Result<Value, asw::Error> {
        let spec = TowerSpec::parse(spec_text)?;
        if spec.levels > 2 {
            return Err(asw::Error::InvalidParams(
                "demo is capped at two levels; use the CLI for more".into(),
            ));
        }
        let tw = Tower::build(&spec)?;
        let n = tw.levels();
        let p = tw.p();
        let d = tw.d();
        let nu = tw.params().nu();
        let t = (t as usize).clamp(1, 24);
        let fe = frobenius_alpha(&tw, n, (p.pow(nu as u32) as usize * t) as u32)?;
        let matrix = nuclear_matrix(&fe, t)?;
        let fred = fredholm_coefficients(&matrix);
        let np = fredholm_newton_polygon(&fred, p, d, n, nu);
        let full = (p - 1) % d == 0;
        let cmp = compare_np_hp(&np, p, d, full);
        let agreement = euler_fredholm_agreement(&fe.alpha, &fred, 2, p.pow(n as u32))?;
        let hp: Vec<Value> = (0..fred.len())
            .map(|m| {
                let eta = hodge_eta(p, d, m as u64)
                    * num_rational::BigRational::from_integer((nu as i64).into());
                json!([m, rational_float(&eta)])
            })
            .collect();
        Ok(json!({
            "p": p,
            "d": d,
            "n": n,
            "t": t,
            "trust_bound": rational_float(&np.trust_bound),
            "points": np
                .points
                .iter()
                .map(|(m, v)| json!([m, v]))
                .collect::<Vec<_>>(),
            "np_vertices": np
                .vertices
                .iter()
                .map(|(m, v)| json!([m, v]))
                .collect::<Vec<_>>(),
            "hp_vertices": hp,
            "full_equality_mode": full,
            "comparison_pass": cmp.all_pass(),
            "comparison_total": cmp.items.len(),
            "matching_conventions": agreement.iter().map(|c| c.name()).collect::<Vec<_>>(),
        }))
    };
    match inner() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_report_json() {
        let s = formula_report(5, 6, 3, 2, false);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["value"], "213");
        assert_eq!(v["c_pdr"], "35/3");
    }

    #[test]
    fn tower_anumbers_json() {
        let s = tower_anumbers("p=3\nlevels=1\nc 2 1\n", 2);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["a_numbers"][0], 1);
        assert_eq!(v["genus"], 1);
    }

    #[test]
    fn newton_hodge_json() {
        let s = newton_hodge("p=3\nlevels=2\nc 2 1\n", 8);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["comparison_pass"], true);
        assert_eq!(v["np_vertices"][1][1], 1);
    }

    #[test]
    fn errors_are_json() {
        let s = tower_anumbers("p=4\nlevels=1\nc 1 1\n", 1);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["error"].is_string());
    }
}
