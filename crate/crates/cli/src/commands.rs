use num_traits::Zero;
use serde_json::json;

use racah_dist::asymmetry::{distinguishability, entropy_of_table, entropy_profile, entropy_type1_approx, h_spectral_table};
use racah_dist::asympt::{
    ev_asymptotics, kolmogorov_distance, limit_profile, normal_density, EvKind, Ratios, Regime,
    TypeILimit,
};
use racah_dist::dist::{
    build_table, build_table_recurrence, pmf_hahn, pmf_racah, pmf_special, special_case, DistTable, Params,
};
use racah_dist::oracle::bruteforce_table;
use racah_dist::qanalog::{q_table, QContext, QRoute};
use racah_dist::suite::{run_suite, SuiteConfig};
use racah_dist::{Rational, Result};

use crate::output::{exact_cells, fraction, Cell, Report};
use crate::{Failure, Method, Route};

const ERRATA: [&str; 2] = ["recurrence-weights-corrected", "casimir-eta-corrected"];

/// Exact tables beyond this size are filled by the recurrence, one step per row.
const SERIES_TABLE_LIMIT: u32 = 2000;

fn params_json(p: &Params) -> serde_json::Value {
    json!({ "n": p.n, "m": p.m, "k": p.k, "l": p.l })
}

fn exact_report(command: &'static str, p: &Params, values: &[Rational], method: &str) -> Report {
    let mut r = Report::new(command, &["x", "num", "den", "float"]);
    for (x, v) in values.iter().enumerate() {
        let mut row = vec![Cell::from(x as u32)];
        row.extend(exact_cells(v));
        r.row(row);
    }
    r.meta("params", params_json(p));
    r.meta("method", json!(method));
    r.meta("erratum_flags", json!(ERRATA));
    r
}

fn table_for(p: &Params) -> Result<DistTable> {
    if p.n > SERIES_TABLE_LIMIT && special_case(p).is_none() {
        build_table_recurrence(p)
    } else {
        build_table(p)
    }
}

fn q_route(route: Route) -> QRoute {
    match route {
        Route::Hahn => QRoute::Hahn,
        Route::Racah => QRoute::Racah,
    }
}

fn route_values(p: &Params, f: fn(&Params, u32) -> Result<Rational>) -> Result<Vec<Rational>> {
    (0..=p.max_row()).map(|x| f(p, x)).collect()
}

pub fn pmf(p: Params, method: Method, q: Option<Rational>) -> std::result::Result<Report, Failure> {
    if let Some(q) = q {
        let route = match method {
            Method::Hahn => Route::Hahn,
            Method::Racah => Route::Racah,
            other => {
                return Err(Failure::Usage(format!(
                    "--q supports --method hahn or racah, got {other:?}"
                )))
            }
        };
        return qpmf(p, q, route);
    }
    let report = match method {
        Method::Hahn => exact_report("pmf", &p, &route_values(&p, pmf_hahn)?, "hahn"),
        Method::Racah => exact_report("pmf", &p, build_table(&p)?.probabilities(), "racah"),
        Method::Special => exact_report("pmf", &p, &route_values(&p, pmf_special)?, "special"),
        Method::Oracle => exact_report("pmf", &p, bruteforce_table(&p)?.probabilities(), "oracle"),
        Method::All => {
            let (report, agree) = pmf_all(p)?;
            if !agree {
                return Err(Failure::Check(report));
            }
            report
        }
    };
    Ok(report)
}

/// Every applicable route side by side; disagreement exits with status 1.
fn pmf_all(p: Params) -> Result<(Report, bool)> {
    let racah = route_values(&p, pmf_racah)?;
    let hahn = route_values(&p, pmf_hahn)?;
    let special = special_case(&p).map(|_| route_values(&p, pmf_special)).transpose()?;
    let oracle = (p.n <= racah_dist::oracle::MAX_N).then(|| bruteforce_table(&p)).transpose()?;
    let mut r = Report::new("pmf", &["x", "num", "den", "float", "hahn", "racah", "special", "oracle", "agree"]);
    let mut all_agree = true;
    for (x, v) in racah.iter().enumerate() {
        let others = [
            Some(hahn[x].clone()),
            special.as_ref().map(|s| s[x].clone()),
            oracle.as_ref().map(|t| t.pmf(x as u32)),
        ];
        let agree = others.iter().flatten().all(|o| o == v);
        all_agree &= agree;
        let mut row = vec![Cell::from(x as u32)];
        row.extend(exact_cells(v));
        row.push(Cell::from(fraction(&hahn[x])));
        row.push(Cell::from(fraction(v)));
        row.push(Cell::from(others[1].as_ref().map(fraction)));
        row.push(Cell::from(others[2].as_ref().map(fraction)));
        row.push(Cell::from(agree));
        r.row(row);
    }
    r.put("all_routes_agree", all_agree);
    r.put("pmf", racah.iter().map(fraction).collect::<Vec<_>>().join(","));
    r.meta("params", params_json(&p));
    r.meta("method", json!("all"));
    r.meta("erratum_flags", json!(ERRATA));
    Ok((r, all_agree))
}

pub fn cdf(p: Params) -> std::result::Result<Report, Failure> {
    let t = build_table(&p)?;
    Ok(exact_report("cdf", &p, &t.prefix_sums(), "racah"))
}

pub fn moments(p: Params, order: u32) -> std::result::Result<Report, Failure> {
    let t = build_table(&p)?;
    let mut r = Report::new("moments", &["order", "num", "den", "float"]);
    for k in 1..=order {
        let mut row = vec![Cell::from(k)];
        row.extend(exact_cells(&t.moment(k)));
        r.row(row);
    }
    r.put("mean", fraction(&t.mean()));
    r.put("variance", fraction(&t.variance()));
    r.put("variance_float", racah_dist::exact::to_f64(&t.variance()));
    r.meta("params", params_json(&p));
    Ok(r)
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::GenericA => "generic",
        Regime::DegenerateB => "degenerate",
        Regime::UndefinedC => "rayleigh",
    }
}

fn ev_kind_name(k: EvKind) -> &'static str {
    match k {
        EvKind::Gaussian => "gaussian",
        EvKind::Geometric => "geometric",
        EvKind::Rayleigh => "rayleigh",
        EvKind::PointMass => "point-mass",
    }
}

pub fn limits(alpha: f64, beta: f64, gamma: f64, delta: f64, n: Option<u32>) -> std::result::Result<Report, Failure> {
    let ratios = Ratios::new(alpha, beta, gamma, delta)?;
    let prof = limit_profile(&ratios);
    let mut r = Report::new("limits", &[]);
    r.put("xi", ratios.xi());
    r.put("kappa", ratios.kappa());
    r.put("eta", prof.eta);
    r.put("d", prof.d);
    r.put("mu", prof.mu);
    r.put("nu", prof.nu);
    r.put("sigma_sq", prof.sigma_sq);
    r.put("sigma", prof.sigma());
    r.put("phi", prof.phi);
    r.put("regime", regime_name(prof.regime));
    if let Some(n) = n {
        let ev = ev_asymptotics(&ratios, n);
        r.put("n", n);
        r.put("ev_mean", ev.mean);
        r.put("ev_variance", ev.variance);
        r.put("ev_kind", ev_kind_name(ev.kind));
    }
    r.meta("ratios", json!({ "alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta }));
    Ok(r)
}

pub fn type1(xi: f64, k: u32, l: u32, n: Option<u32>) -> std::result::Result<Report, Failure> {
    let lim = TypeILimit::new(xi, k, l)?;
    let exact = match n {
        Some(n) => {
            let m = (xi * n as f64).round() as i64;
            let p = Params::new(n as i64, m, k as i64, l as i64)?;
            Some((p, build_table(&p)?))
        }
        None => None,
    };
    let columns: &[&str] = if exact.is_some() { &["x", "q", "num", "den", "float"] } else { &["x", "q"] };
    let mut r = Report::new("type1", columns);
    for (x, q) in lim.q_table.iter().enumerate() {
        let mut row = vec![Cell::from(x as u32), Cell::from(*q)];
        if let Some((_, t)) = &exact {
            row.extend(exact_cells(&t.pmf(x as u32)));
        }
        r.row(row);
    }
    r.put("mean", lim.mean_closed());
    r.put("variance", lim.variance_closed());
    if let Some((p, t)) = &exact {
        r.put("entropy", entropy_of_table(t));
        r.put("entropy_approx", entropy_type1_approx(p.n, xi, k, l)?);
        r.meta("params", params_json(p));
    }
    Ok(r)
}

pub fn clt_check(xi: f64, kappa: f64, alpha: f64, n: u32) -> std::result::Result<Report, Failure> {
    let ratios = Ratios::from_xi_kappa_alpha(xi, kappa, alpha)?;
    let prof = limit_profile(&ratios);
    let p = ratios.params_at(n)?;
    let t = table_for(&p)?;
    let floats = t.to_f64();
    let mut r = Report::new("clt-check", &["x", "num", "den", "float", "psi"]);
    for (x, v) in t.probabilities().iter().enumerate() {
        let mut row = vec![Cell::from(x as u32)];
        row.extend(exact_cells(v));
        row.push(Cell::from(normal_density(n, &prof, x as f64)?));
        r.row(row);
    }
    r.put("kolmogorov_distance", kolmogorov_distance(n, &prof, &floats)?);
    r.put("mu", prof.mu);
    r.put("sigma", prof.sigma());
    r.meta("params", params_json(&p));
    Ok(r)
}

pub fn entropy(p: Params, bits: bool, eps: &[f64]) -> std::result::Result<Report, Failure> {
    let scale = if bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
    let t = build_table(&p)?;
    let prof = entropy_profile(&p)?;
    let mut r = Report::new("entropy", &["eps", "h_spectral"]);
    for &e in eps {
        r.row(vec![Cell::from(e), Cell::from(h_spectral_table(&t, e)? * scale)]);
    }
    r.put("entropy", prof.exact_entropy * scale);
    r.put("type1_approx", prof.type1_approx * scale);
    r.put("type2_leading", prof.type2_leading * scale);
    r.put("type2_expansion", prof.constants.map(|c| c.expansion(p.n) * scale));
    r.meta("params", params_json(&p));
    r.meta("unit", json!(if bits { "bits" } else { "nats" }));
    Ok(r)
}

pub fn hspec(p: Params, eps: f64, deltas: Option<(f64, f64)>, bits: bool) -> std::result::Result<Report, Failure> {
    let scale = if bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
    let t = build_table(&p)?;
    let mut r = Report::new("hspec", &["eps", "h_spectral"]);
    r.row(vec![Cell::from(eps), Cell::from(h_spectral_table(&t, eps)? * scale)]);
    if let Some((d1, d2)) = deltas {
        let (lo, hi) = distinguishability(&t, eps, d1, d2)?;
        r.put("log_count_lower", lo * scale);
        r.put("log_count_upper", hi * scale);
    }
    r.meta("params", params_json(&p));
    r.meta("unit", json!(if bits { "bits" } else { "nats" }));
    Ok(r)
}

pub fn qpmf(p: Params, q: Rational, route: Route) -> std::result::Result<Report, Failure> {
    let ctx = QContext::new(q.clone(), p)?;
    let values = q_table(&ctx, q_route(route))?;
    let name = match route {
        Route::Hahn => "q-hahn",
        Route::Racah => "q-racah",
    };
    let mut r = exact_report("qpmf", &p, &values, name);
    r.meta("q", json!(fraction(&q)));
    Ok(r)
}

pub fn verify(n_max: u32) -> std::result::Result<Report, Failure> {
    let report = run_suite(&SuiteConfig::new(n_max));
    let mut r = Report::new("verify", &["check", "n", "m", "k", "l", "detail"]);
    for f in &report.failures {
        let p = f.params;
        r.row(vec![f.check.into(), p.n.into(), p.m.into(), p.k.into(), p.l.into(), f.detail.clone().into()]);
    }
    r.put("cases", report.cases as u32);
    r.put("checks", report.checks as u32);
    r.put("failures", report.failures.len() as u32);
    r.put("passed", report.passed());
    r.meta("n_max", json!(n_max));
    r.meta("erratum_flags", json!(ERRATA));
    if report.passed() {
        Ok(r)
    } else {
        Err(Failure::Check(r))
    }
}

fn sizes(extra: &[u32]) -> Vec<u32> {
    let mut out = vec![100, 1000];
    out.extend(extra.iter().copied().filter(|n| !matches!(n, 100 | 1000)));
    out
}

pub fn plotdata(figure: u8, extra: &[u32]) -> std::result::Result<Report, Failure> {
    let fig_ratios = || Ratios::from_xi_kappa_alpha(0.4, 0.6, 0.3);
    let mut r = match figure {
        1 => {
            let mut r = Report::new("plotdata", &["n", "m", "k", "l", "x", "num", "den", "float"]);
            for p in [Params::new(100, 30, 40, 20)?, Params::new(100, 40, 60, 30)?] {
                for (x, v) in build_table(&p)?.probabilities().iter().enumerate() {
                    let mut row = vec![p.n.into(), p.m.into(), p.k.into(), p.l.into(), Cell::from(x as u32)];
                    row.extend(exact_cells(v));
                    r.row(row);
                }
            }
            r
        }
        2 => {
            let ratios = fig_ratios()?;
            let mut r = Report::new("plotdata", &["n", "x", "x_over_n", "num", "den", "float"]);
            for n in sizes(extra) {
                let t = table_for(&ratios.params_at(n)?)?;
                for (x, v) in t.prefix_sums().iter().enumerate() {
                    let mut row = vec![n.into(), Cell::from(x as u32), Cell::from(x as f64 / n as f64)];
                    row.extend(exact_cells(v));
                    r.row(row);
                }
            }
            r.put("mu", limit_profile(&ratios).mu);
            r
        }
        3 => {
            let (xi, k, l) = (0.5, 2, 1);
            let lim = TypeILimit::new(xi, k, l)?;
            let mut r = Report::new("plotdata", &["n", "log10_n", "entropy_over_ln_n", "approx_over_ln_n"]);
            for j in 4..=16 {
                let n = (10f64.powf(j as f64 / 4.0) / 2.0).round() as u32 * 2;
                let p = Params::new(n as i64, (n / 2) as i64, k as i64, l as i64)?;
                let s = entropy_of_table(&build_table(&p)?);
                let a = entropy_type1_approx(n, xi, k, l)?;
                let ln_n = (n as f64).ln();
                r.row(vec![n.into(), Cell::from((n as f64).log10()), Cell::from(s / ln_n), Cell::from(a / ln_n)]);
            }
            r.put("u", lim.mean_closed());
            r
        }
        _ => {
            let ratios = fig_ratios()?;
            let prof = limit_profile(&ratios);
            let mut r = Report::new("plotdata", &["n", "x", "num", "den", "float", "psi"]);
            for n in sizes(extra) {
                let t = table_for(&ratios.params_at(n)?)?;
                for (x, v) in t.probabilities().iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let mut row = vec![n.into(), Cell::from(x as u32)];
                    row.extend(exact_cells(v));
                    row.push(Cell::from(normal_density(n, &prof, x as f64)?));
                    r.row(row);
                }
            }
            r.put("mu", prof.mu);
            r.put("sigma", prof.sigma());
            r
        }
    };
    r.meta("figure", json!(figure));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use racah_dist::asympt::ratios_from_params;

    #[test]
    fn sizes_keep_defaults_first() {
        assert_eq!(sizes(&[10000, 100]), vec![100, 1000, 10000]);
    }

    #[test]
    fn figure_four_profile() {
        let prof = limit_profile(&Ratios::from_xi_kappa_alpha(0.4, 0.6, 0.3).unwrap());
        assert!((prof.mu - 0.3).abs() < 1e-12);
        assert!((prof.sigma().unwrap() - 0.3354).abs() < 1e-4);
    }

    #[test]
    fn ratios_round_trip_through_params() {
        let p = Params::new(100, 40, 60, 30).unwrap();
        let r = ratios_from_params(&p).unwrap().to_f64();
        assert_eq!(r.params_at(100).unwrap(), p);
    }
}
