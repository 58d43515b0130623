//! Command implementations: orchestrate the library, fill a report, pick
//! the exit code.

use crate::report::RunReport;
use crate::{Cli, Command};
use asw::cartier::higher_anumbers;
use asw::error::{Error, Result};
use asw::iwasawa::{
    verify_module_structure, verify_t_triangular, verify_taunit, verify_trace, CheckReport,
};
use asw::lfun::{
    char_value, compare_np_hp, euler_fredholm_agreement, euler_product, fredholm_coefficients,
    fredholm_newton_polygon, frobenius_alpha, hodge_eta, nuclear_matrix, EulerConvention,
};
use asw::poly::PolyOverField;
use asw::profile::{LambdaMode, TowerProfile};
use asw::tower::{Lift, TowerSpec};
use asw::Tower;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::process::ExitCode;

pub fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Formula { p, d, r, n } => {
            if let Some(preset) = &cli.preset {
                if preset == "dp1sequence" {
                    return preset_dp1sequence(cli);
                }
                return Err(Error::InvalidParams(format!(
                    "preset {preset} does not apply to `formula`"
                )));
            }
            let p = p.ok_or_else(|| Error::InvalidParams("missing -p".into()))?;
            let d = d.ok_or_else(|| Error::InvalidParams("missing -d".into()))?;
            cmd_formula(cli, p, d, *r, *n)
        }
        Command::Anumber { specfile, n, r } => {
            if let Some(preset) = &cli.preset {
                if preset == "table1" {
                    return preset_table1(cli);
                }
                return Err(Error::InvalidParams(format!(
                    "preset {preset} does not apply to `anumber`"
                )));
            }
            let path = specfile
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("missing spec file".into()))?;
            cmd_anumber(cli, path, *n, *r)
        }
        Command::Newton {
            specfile,
            n,
            t,
            s_degree,
            convention,
        } => cmd_newton(cli, specfile, *n, *t, *s_degree, convention),
        Command::Lfunction {
            specfile,
            n,
            s_degree,
            t,
            convention,
        } => cmd_lfunction(cli, specfile, *n, *s_degree, *t, convention),
        Command::Verify { specfile, n, suite } => cmd_verify(cli, specfile, *n, suite),
    }
}

fn lambda_mode(cli: &Cli) -> Result<LambdaMode> {
    let s = cli.lambda.as_str();
    if s == "safe" {
        return Ok(LambdaMode::Safe);
    }
    if s == "empirical" {
        return Ok(LambdaMode::Empirical(0));
    }
    if let Some(rest) = s.strip_prefix("empirical:") {
        let n: u64 = rest
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad lambda mode {s:?}")))?;
        return Ok(LambdaMode::Empirical(n));
    }
    Err(Error::InvalidParams(format!("bad lambda mode {s:?}")))
}

fn load_spec(cli: &Cli, path: &std::path::Path) -> Result<TowerSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut spec = TowerSpec::parse(&text)?;
    if let Some(lift) = &cli.lift {
        spec.lift = if lift == "integer" {
            Lift::Integer
        } else {
            Lift::Teichmuller
        };
    }
    Ok(spec)
}

fn report_for(cli: &Cli, command: &str) -> RunReport {
    RunReport::new(command, !cli.no_timestamp)
}

fn cmd_formula(cli: &Cli, p: u64, d: u64, r: u64, n: u32) -> Result<ExitCode> {
    let mode = lambda_mode(cli)?;
    let profile = TowerProfile::new(p, d)?;
    if r < 1 || n < 1 {
        return Err(Error::InvalidParams("r and n must be positive".into()));
    }
    let f = profile.anumber_formula(r, n, mode)?;
    let cut = &f.cutoff;
    let triangle = profile.triangle_term(r, &f.t_used);
    let lattice = num_rational::BigRational::from_integer(f.value.clone()) - triangle.clone();
    let (s_n, d_n, g_n) = profile.breaks_and_genus(n);
    let mut report = report_for(cli, "formula");
    report.set_parameters(json!({
        "p": p, "d": d, "r": r, "n": n,
        "lambda_mode": cli.lambda,
        "seed": cli.seed,
    }));
    report.set_results(json!({
        "delta": cut.delta,
        "t_n": cut.t_n.to_string(),
        "t_prime_n": cut.t_prime_n.to_string(),
        "s_n": cut.s_n_rem.to_string(),
        "lambda": cut.lambda.to_string(),
        "lambda_empirical": cut.lambda_empirical,
        "d_t": cut.d_t.to_string(),
        "epsilon": cut.epsilon.to_string(),
        "c_pdr": cut.c_pdr.to_string(),
        "exact": f.exact,
        "t_used": f.t_used.to_string(),
        "triangle_term": triangle.to_string(),
        "lattice_count": lattice.to_string(),
        "value": f.value.to_string(),
        "lower_bound": f.lower.to_string(),
        "upper_break": s_n.to_string(),
        "lower_break": d_n.to_string(),
        "genus": g_n.to_string(),
        "asymptotic_ratio": profile.asymptotic_ratio(r).to_string(),
    }));
    report.summary(format!(
        "F = {} (exact: {}), C(p,d,r) = {}, sandwich [{}, {}]",
        f.value, f.exact, cut.c_pdr, f.lower, f.value
    ));
    report.emit(cli.csv);
    Ok(ExitCode::SUCCESS)
}

fn anumber_results(tw: &Tower, n: usize, r_max: u32, mode: LambdaMode) -> Result<Value> {
    let (a, prof) = higher_anumbers(tw, n, r_max)?;
    let mut formula_rows = vec![];
    for r in 1..=r_max as u64 {
        let f = tw.profile().anumber_formula(r, n as u32, mode)?;
        let a_r = a[r as usize - 1];
        let value = f.value.to_u64().unwrap_or(u64::MAX);
        let verdict = if value == a_r {
            "equal"
        } else if value > a_r && f.lower <= num_rational::BigRational::from_integer(a_r.into()) {
            "within sandwich"
        } else {
            "VIOLATION"
        };
        if verdict == "VIOLATION" {
            return Err(Error::internal(format!(
                "formula sandwich violated at r = {r}: F = {value}, a = {a_r}"
            )));
        }
        if f.exact && value != a_r {
            return Err(Error::internal(format!(
                "exact formula missed at r = {r}: F = {value}, a = {a_r}"
            )));
        }
        formula_rows.push(json!({
            "r": r,
            "value": f.value.to_string(),
            "c_pdr": f.cutoff.c_pdr.to_string(),
            "exact": f.exact,
            "verdict": verdict,
        }));
    }
    let d_breaks: Vec<u64> = (0..n).map(|m| tw.lower_break(m)).collect();
    Ok(json!({
        "a_numbers": a,
        "multiplicities": prof.multiplicities,
        "nilpotency_index": prof.nilpotency_index,
        "genus": prof.genus,
        "lower_breaks": d_breaks,
        "formula": formula_rows,
    }))
}

fn cmd_anumber(
    cli: &Cli,
    path: &std::path::Path,
    n: Option<usize>,
    r_max: u32,
) -> Result<ExitCode> {
    let mode = lambda_mode(cli)?;
    let spec = load_spec(cli, path)?;
    let tw = Tower::build(&spec)?;
    let n = n.unwrap_or(tw.levels());
    if n < 1 || n > tw.levels() {
        return Err(Error::InvalidParams(format!(
            "level {n} outside the built tower (1..={})",
            tw.levels()
        )));
    }
    let results = anumber_results(&tw, n, r_max, mode)?;
    let mut report = report_for(cli, "anumber");
    report.set_spec_digest(&spec.serialize());
    report.set_parameters(json!({
        "p": tw.p(), "d": tw.d(), "n": n, "r_max": r_max,
        "lift": spec.lift.to_string(),
        "lambda_mode": cli.lambda,
        "seed": cli.seed,
    }));
    let a = results["a_numbers"].clone();
    let genus = results["genus"].clone();
    report.set_results(results);
    report.summary(format!("a_{n}^(1..{r_max}) = {a}, genus {genus}"));
    report.emit(cli.csv);
    Ok(ExitCode::SUCCESS)
}

fn check_items_json(rep: &CheckReport) -> Value {
    json!({
        "name": rep.name,
        "total": rep.items.len(),
        "failed": rep.failures().count(),
        "failures": rep.failures().map(|f| json!({
            "label": f.label,
            "detail": f.detail,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_newton(
    cli: &Cli,
    path: &std::path::Path,
    n: Option<usize>,
    t: Option<usize>,
    s_degree: u32,
    convention: &str,
) -> Result<ExitCode> {
    let spec = load_spec(cli, path)?;
    let tw = Tower::build(&spec)?;
    let n = n.unwrap_or(tw.levels());
    if n < 1 || n > tw.levels() {
        return Err(Error::InvalidParams("level outside the built tower".into()));
    }
    let p = tw.p();
    let d = tw.d();
    let pn = p.pow(n as u32);
    // default truncation certifies everything below T-valuation p^n
    let t = t.unwrap_or_else(|| ((d * pn) as usize).div_ceil(p as usize - 1).max(2));
    if t > 64 {
        return Err(Error::InvalidParams(format!(
            "truncation t = {t} too large; pass -t explicitly below 64"
        )));
    }
    let nu = tw.params().nu();
    let p_nu = p.pow(nu as u32);
    let inv_deg = (p_nu as usize * t) as u32;
    let fe = frobenius_alpha(&tw, n, inv_deg)?;
    let matrix = nuclear_matrix(&fe, t)?;
    let fred = fredholm_coefficients(&matrix);
    let np = fredholm_newton_polygon(&fred, p, d, n, nu);
    let full = (p - 1) % d == 0;
    let comparison = compare_np_hp(&np, p, d, full);
    let agreement = euler_fredholm_agreement(&fe.alpha, &fred, s_degree, pn)?;
    let requested = EulerConvention::from_name(convention)
        .ok_or_else(|| Error::InvalidParams(format!("unknown convention {convention}")))?;

    let mut report = report_for(cli, "newton");
    report.set_spec_digest(&spec.serialize());
    report.set_parameters(json!({
        "p": p, "d": d, "n": n, "t": t, "s_degree": s_degree,
        "nu": nu,
        "convention": convention,
        "seed": cli.seed,
    }));
    let hp: Vec<Value> = (0..fred.len())
        .map(|m| {
            json!([
                m,
                (hodge_eta(p, d, m as u64)
                    * num_rational::BigRational::from_integer((nu as i64).into()))
                .to_string()
            ])
        })
        .collect();
    report.set_results(json!({
        "alpha_x_degree": fe.alpha.x_degree().unwrap_or(0),
        "alpha_growth": "verified",
        "trust_bound": np.trust_bound.to_string(),
        "points": np.points.iter().map(|(m, v)| json!([m, v])).collect::<Vec<_>>(),
        "np_vertices": np.vertices.iter().map(|(m, v)| json!([m, v])).collect::<Vec<_>>(),
        "hp_vertices": hp,
        "full_equality_mode": full,
        "comparison": check_items_json(&comparison),
        "euler_fredholm_matching": agreement.iter().map(|c| c.name()).collect::<Vec<_>>(),
        "requested_convention_matches": agreement.contains(&requested),
    }));
    report.summary(format!(
        "NP vertices {:?} below trust {}; comparison {} / {} pass",
        np.vertices,
        np.trust_bound,
        comparison.items.len() - comparison.failures().count(),
        comparison.items.len()
    ));
    report.emit(cli.csv);
    if comparison.all_pass() && agreement.contains(&requested) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_lfunction(
    cli: &Cli,
    path: &std::path::Path,
    n: Option<usize>,
    s_degree: u32,
    t: Option<usize>,
    convention: &str,
) -> Result<ExitCode> {
    let spec = load_spec(cli, path)?;
    let tw = Tower::build(&spec)?;
    let n = n.unwrap_or(tw.levels());
    if n < 1 || n > tw.levels() {
        return Err(Error::InvalidParams("level outside the built tower".into()));
    }
    let conv = EulerConvention::from_name(convention)
        .ok_or_else(|| Error::InvalidParams(format!("unknown convention {convention}")))?;
    let p = tw.p();
    let pn = p.pow(n as u32);
    let nu = tw.params().nu();
    let t = t.unwrap_or_else(|| {
        ((tw.d() * pn) as usize)
            .div_ceil(p as usize - 1)
            .max(s_degree as usize)
    });
    if t > 64 {
        return Err(Error::InvalidParams(format!(
            "truncation t = {t} too large; pass -t explicitly below 64"
        )));
    }
    let inv_deg = (p.pow(nu as u32) as usize * t) as u32;
    let fe = frobenius_alpha(&tw, n, inv_deg)?;
    let euler = euler_product(&fe.alpha, s_degree, conv)?;
    let matrix = nuclear_matrix(&fe, t)?;
    let fred = fredholm_coefficients(&matrix);
    let agreement = euler_fredholm_agreement(&fe.alpha, &fred, s_degree, pn)?;

    // character exponents at the rational places
    let params = tw.params();
    let mut char_table = vec![];
    for place in PolyOverField::monic_irreducibles(params, 1) {
        let c = char_value(&fe.alpha, &place)?;
        char_table.push(json!({ "place": place.to_string(), "exponent": c }));
    }

    let mut report = report_for(cli, "lfunction");
    report.set_spec_digest(&spec.serialize());
    report.set_parameters(json!({
        "p": p, "d": tw.d(), "n": n, "s_degree": s_degree, "t": t,
        "convention": convention,
        "seed": cli.seed,
    }));
    report.set_results(json!({
        "euler_coefficients": euler.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "fredholm_coefficients": fred.iter().take(s_degree as usize + 1)
            .map(|c| c.to_string()).collect::<Vec<_>>(),
        "degree_one_characters": char_table,
        "euler_fredholm_matching": agreement.iter().map(|c| c.name()).collect::<Vec<_>>(),
        "requested_convention_matches": agreement.contains(&conv),
    }));
    report.summary(format!(
        "matching conventions: {:?}",
        agreement.iter().map(|c| c.name()).collect::<Vec<_>>()
    ));
    report.emit(cli.csv);
    if agreement.contains(&conv) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_verify(
    cli: &Cli,
    path: &std::path::Path,
    n: Option<usize>,
    suite: &str,
) -> Result<ExitCode> {
    let spec = load_spec(cli, path)?;
    let tw = Tower::build(&spec)?;
    let n = n.unwrap_or(tw.levels());
    if n < 1 || n > tw.levels() {
        return Err(Error::InvalidParams("level outside the built tower".into()));
    }
    let mut reports: Vec<CheckReport> = vec![];
    if suite == "taunit" || suite == "all" {
        reports.push(verify_taunit(&tw, n));
    }
    if suite == "triangular" || suite == "all" {
        reports.push(verify_t_triangular(&tw, n));
    }
    if suite == "trace" || suite == "all" {
        if n < 2 {
            return Err(Error::InvalidParams(
                "trace suite needs a tower with at least 2 levels".into(),
            ));
        }
        reports.push(verify_trace(&tw, n - 1));
    }
    if suite == "module" || suite == "all" {
        reports.push(verify_module_structure(&tw, n)?);
    }
    if reports.is_empty() {
        return Err(Error::InvalidParams(format!("unknown suite {suite:?}")));
    }
    let all_pass = reports.iter().all(|r| r.all_pass());
    let mut report = report_for(cli, "verify");
    report.set_spec_digest(&spec.serialize());
    report.set_parameters(json!({
        "p": tw.p(), "d": tw.d(), "n": n, "suite": suite,
        "seed": cli.seed,
    }));
    report.set_results(json!({
        "suites": reports.iter().map(check_items_json).collect::<Vec<_>>(),
        "all_pass": all_pass,
    }));
    for r in &reports {
        report.summary(format!(
            "{}: {}/{} pass",
            r.name,
            r.items.len() - r.failures().count(),
            r.items.len()
        ));
    }
    report.emit(cli.csv);
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Table of a_2^(3) over F_5 for the five packaged specs, under both lift
/// conventions, computed on worker threads.
fn preset_table1(cli: &Cli) -> Result<ExitCode> {
    let mode = lambda_mode(cli)?;
    let bodies = [
        ("X^6+X^4+2X^3+X^2+X", "c 6 1\nc 4 1\nc 3 2\nc 2 1\nc 1 1\n"),
        ("X^6+X^4+2X^2", "c 6 1\nc 4 1\nc 2 2\n"),
        ("X^6+X^3+X^2+3X", "c 6 1\nc 3 1\nc 2 1\nc 1 3\n"),
        ("X^6+4X", "c 6 1\nc 1 4\n"),
        ("X^6", "c 6 1\n"),
    ];
    let mut jobs = vec![];
    for (name, body) in bodies {
        for lift in ["teichmuller", "integer"] {
            jobs.push((
                name.to_string(),
                lift.to_string(),
                format!("p=5\nlevels=2\nlift={lift}\n{body}"),
            ));
        }
    }
    let results: Vec<Result<Value>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(name, lift, text)| {
                scope.spawn(move || -> Result<Value> {
                    let spec = TowerSpec::parse(text)?;
                    let tw = Tower::build(&spec)?;
                    let (a, _) = higher_anumbers(&tw, 2, 3)?;
                    Ok(json!({
                        "f": name,
                        "lift": lift,
                        "a_2_r": a,
                    }))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut grid = vec![];
    for r in results {
        grid.push(r?);
    }
    // formula-side reference for comparison
    let profile = TowerProfile::new(5, 6)?;
    let f = profile.anumber_formula(3, 2, mode)?;
    let mut report = report_for(cli, "anumber");
    report.set_parameters(json!({
        "preset": "table1",
        "lambda_mode": cli.lambda,
        "seed": cli.seed,
    }));
    report.set_results(json!({
        "grid": grid,
        "formula_upper": f.value.to_string(),
        "formula_c_pdr": f.cutoff.c_pdr.to_string(),
    }));
    report.summary("table1 grid computed under both lift conventions".to_string());
    report.emit(cli.csv);
    Ok(ExitCode::SUCCESS)
}

/// The d | (p-1) sequence at p=5, d=4, r=1: exact formula values for
/// n = 1..4 with the closed form cross-check.
fn preset_dp1sequence(cli: &Cli) -> Result<ExitCode> {
    let mode = lambda_mode(cli)?;
    let profile = TowerProfile::new(5, 4)?;
    let mut rows = vec![];
    for n in 1..=4u32 {
        let f = profile.anumber_formula(1, n, mode)?;
        let closed = profile.anumber_exact_r1(n)?;
        if f.value != closed {
            return Err(Error::internal(format!(
                "formula and closed form disagree at n = {n}"
            )));
        }
        rows.push(json!({
            "n": n,
            "value": f.value.to_string(),
            "exact": f.exact,
        }));
    }
    let mut report = report_for(cli, "formula");
    report.set_parameters(json!({
        "preset": "dp1sequence",
        "p": 5, "d": 4, "r": 1,
        "lambda_mode": cli.lambda,
        "seed": cli.seed,
    }));
    report.set_results(json!({ "sequence": rows }));
    report.summary("a_n for n = 1..4 at p=5, d=4, r=1".to_string());
    report.emit(cli.csv);
    Ok(ExitCode::SUCCESS)
}
