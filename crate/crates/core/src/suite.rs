//! Exhaustive exact invariant sweep over the cone up to a given `n`.
//!
//! Each parameter point is checked independently, so the sweep shards
//! across workers; failures are collected rather than short-circuited.

use num_traits::{One, Zero};

use crate::dist::{
    build_table, cdf, expectation_half, pmf_hahn, pmf_racah, pmf_special, recurrence_residual, special_case,
    casimir_check, DistTable, Params,
};
use crate::exact::{int, Rational};
use crate::exec::Exec;
use crate::oracle::{self, casimir_of_table};
use crate::qanalog::{q_cdf, q_table, QContext, QRoute};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub n_max: u32,
    /// Points with `n` up to this bound are also checked against the group sum.
    pub oracle_n_max: u32,
    /// Deformation parameters for the q-side checks.
    pub q_values: Vec<Rational>,
    pub q_n_max: u32,
    pub exec: Exec,
}

impl SuiteConfig {
    pub fn new(n_max: u32) -> Self {
        SuiteConfig {
            n_max,
            oracle_n_max: n_max.min(8),
            q_values: vec![Rational::new(1.into(), 2.into()), int(1), int(2), int(3)],
            q_n_max: n_max.min(8),
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: &'static str,
    pub params: Params,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: SuiteReport) -> SuiteReport {
        self.cases += other.cases;
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self
    }
}

struct Case {
    params: Params,
    report: SuiteReport,
}

impl Case {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.report.checks += 1;
        if !ok {
            self.report.failures.push(Failure { check: name, params: self.params, detail: detail() });
        }
    }

    fn check_result<T>(&mut self, name: &'static str, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, || e.to_string());
                None
            }
        }
    }
}

fn check_point(p: Params, cfg: &SuiteConfig) -> SuiteReport {
    let mut case = Case { params: p, report: SuiteReport { cases: 1, ..Default::default() } };
    let Some(table) = case.check_result("table", build_table(&p)) else {
        return case.report;
    };
    check_routes(&mut case, &table);
    check_cdf(&mut case, &table);
    check_recurrence(&mut case, &table);
    check_casimir(&mut case, &table);
    if p.n == 2 * p.m {
        if let Some(e) = case.check_result("expectation_half", expectation_half(p.m, p.k, p.l)) {
            case.check("expectation_half", e == table.mean(), || format!("closed form {e}, table {}", table.mean()));
        }
    }
    if p.n <= cfg.oracle_n_max {
        if let Some(brute) = case.check_result("oracle", oracle::bruteforce_table_with(&p, Exec::Sequential)) {
            case.check("oracle", brute == table, || "group sum differs from Racah table".into());
        }
    }
    if p.n <= cfg.q_n_max && p.m <= p.n - p.m {
        for q in &cfg.q_values {
            check_q(&mut case, q, &table);
        }
    }
    case.report
}

fn check_routes(case: &mut Case, table: &DistTable) {
    let p = case.params;
    let special = special_case(&p).is_some();
    for x in 0..=p.max_row() {
        let expect = table.pmf(x);
        let hahn = case.check_result("hahn", pmf_hahn(&p, x));
        case.check("hahn", hahn.as_ref() == Some(&expect), || format!("x={x}: {hahn:?} vs {expect}"));
        let racah = case.check_result("racah", pmf_racah(&p, x));
        case.check("racah", racah.as_ref() == Some(&expect), || format!("x={x}: {racah:?} vs {expect}"));
        if special {
            let s = case.check_result("special", pmf_special(&p, x));
            case.check("special", s.as_ref() == Some(&expect), || format!("x={x}: {s:?} vs {expect}"));
        }
        let mirrored = case.check_result("symmetry", pmf_racah(&p.mirror(), x));
        case.check("symmetry", mirrored.as_ref() == Some(&expect), || format!("x={x}"));
    }
}

fn check_cdf(case: &mut Case, table: &DistTable) {
    let p = case.params;
    for (x, prefix) in table.prefix_sums().into_iter().enumerate() {
        let c = case.check_result("cdf", cdf(&p, x as u32));
        case.check("cdf", c.as_ref() == Some(&prefix), || format!("x={x}: {c:?} vs {prefix}"));
    }
    let total = case.check_result("cdf", cdf(&p, p.reduced().m));
    case.check("cdf_total", total.as_ref().is_some_and(One::is_one), || format!("s(m) = {total:?}"));
}

fn check_recurrence(case: &mut Case, table: &DistTable) {
    let p = case.params;
    for x in 0..=p.reduced().m {
        let at = |j: i64| if j < 0 { Rational::zero() } else { table.pmf(j as u32) };
        let xi = x as i64;
        let r = case.check_result("recurrence", recurrence_residual(&p, x, &at(xi - 1), &at(xi), &at(xi + 1)));
        case.check("recurrence", r.as_ref().is_some_and(Zero::is_zero), || format!("x={x}: residual {r:?}"));
    }
}

fn check_casimir(case: &mut Case, table: &DistTable) {
    let p = case.params;
    if p.n > 0 {
        if let Some((_, res)) = case.check_result("casimir", casimir_check(&p)) {
            case.check("casimir", res.is_zero(), || format!("residual {res}"));
        }
    }
    let (spectral, closed) = casimir_of_table(table);
    case.check("casimir_spectral", spectral == closed, || format!("{spectral} vs {closed}"));
}

fn check_q(case: &mut Case, q: &Rational, table: &DistTable) {
    let p = case.params;
    let Some(ctx) = case.check_result("q_context", QContext::new(q.clone(), p)) else {
        return;
    };
    let hahn = case.check_result("q_hahn", q_table(&ctx, QRoute::Hahn));
    let racah = case.check_result("q_racah", q_table(&ctx, QRoute::Racah));
    let (Some(hahn), Some(racah)) = (hahn, racah) else {
        return;
    };
    case.check("q_routes", hahn == racah, || format!("q={q}"));
    let total: Rational = racah.iter().sum();
    case.check("q_normalization", total.is_one(), || format!("q={q}: sum {total}"));
    let mut acc = Rational::zero();
    for x in 0..=p.m {
        acc += &racah[x as usize];
        let s = case.check_result("q_cdf", q_cdf(&ctx, x));
        case.check("q_cdf", s.as_ref() == Some(&acc), || format!("q={q} x={x}"));
    }
    if q.is_one() {
        case.check("q_degeneration", racah == table.probabilities(), || "q=1 differs from classical".into());
    }
    let negative = racah.iter().position(|v| *v < Rational::zero());
    case.check("q_positivity", negative.is_none(), || format!("q={q}: p({negative:?}) < 0"));
}

/// Run every check on every point with `n <= cfg.n_max`.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_on(Params::enumerate(cfg.n_max), cfg)
}

/// Run every check on an explicit list of points.
pub fn run_on(points: Vec<Params>, cfg: &SuiteConfig) -> SuiteReport {
    cfg.exec.map_reduce(points, |p| check_point(p, cfg), SuiteReport::default, SuiteReport::merge)
}
