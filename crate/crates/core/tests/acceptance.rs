//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use proptest::prelude::Rng;
use proptest::test_runner::{RngAlgorithm, TestRng};

use racah_dist::asymmetry::{entropy_avg, entropy_of_table, h_spectral};
use racah_dist::asympt::{
    binary_entropy, kolmogorov_distance, limit_profile, DegenerateLimit, RateFunctions, Ratios, TypeILimit,
};
use racah_dist::dist::{
    build_table, cdf, casimir_check, expectation_half, pmf_hahn, pmf_racah, recurrence_residual,
    recurrence_residual_with, Params, RecurrenceForm,
};
use racah_dist::exact::{frac, int, to_f64, Rational};
use racah_dist::oracle::{bruteforce_table, casimir_bruteforce};
use racah_dist::qanalog::{q_table, QContext, QRoute};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(n: u32, m: u32, k: u32, l: u32) -> Params {
    Params::new(n as i64, m as i64, k as i64, l as i64).expect("valid tuple")
}

fn tail_sum(probs: &[f64], from: usize) -> f64 {
    probs.iter().skip(from).sum()
}

fn list(v: &[f64], fmt: impl Fn(f64) -> String) -> String {
    format!("[{}]", v.iter().map(|&x| fmt(x)).collect::<Vec<_>>().join(", "))
}

fn sample_small() -> Vec<Params> {
    let all = Params::enumerate(30);
    let mut rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]);
    (0..200).map(|_| all[(rng.next_u64() % all.len() as u64) as usize]).collect()
}

fn route_agreement() -> Outcome {
    let points = Params::enumerate(8);
    for q in &points {
        let brute = bruteforce_table(q).map_err(|e| format!("{q}: {e}"))?;
        for x in 0..=q.max_row() {
            let h = pmf_hahn(q, x).map_err(|e| format!("{q}: {e}"))?;
            let r = pmf_racah(q, x).map_err(|e| format!("{q}: {e}"))?;
            ensure(h == r && r == brute.pmf(x), || format!("{q} x={x}: hahn {h}, racah {r}, group {}", brute.pmf(x)))?;
        }
    }
    Ok(format!("{} tuples, exact", points.len()))
}

fn normalization(sample: &[Params]) -> Outcome {
    for q in sample {
        let t = build_table(q).map_err(|e| format!("{q}: {e}"))?;
        let total: Rational = t.probabilities().iter().sum();
        ensure(total.is_one(), || format!("{q}: sum {total}"))?;
        for (x, s) in t.prefix_sums().iter().enumerate() {
            let c = cdf(q, x as u32).map_err(|e| format!("{q}: {e}"))?;
            ensure(&c == s, || format!("{q} x={x}: cdf {c} vs {s}"))?;
        }
        let at_m = cdf(q, q.m).map_err(|e| format!("{q}: {e}"))?;
        ensure(at_m.is_one(), || format!("{q}: s(m) = {at_m}"))?;
    }
    Ok(format!("{} sampled tuples, n <= 30", sample.len()))
}

fn support(sample: &[Params]) -> Outcome {
    for q in sample {
        let t = build_table(q).map_err(|e| format!("{q}: {e}"))?;
        let top = q.m.min(q.n - q.m).min(q.k);
        for x in top + 1..=q.max_row() {
            ensure(t.pmf(x).is_zero(), || format!("{q}: p({x}) = {}", t.pmf(x)))?;
        }
        ensure(!t.pmf(top).is_zero(), || format!("{q}: p({top}) = 0"))?;
    }
    Ok("p(x) = 0 exactly past min(m, n-m, k)".into())
}

fn recurrence(sample: &[Params]) -> Outcome {
    for q in sample {
        let t = build_table(q).map_err(|e| format!("{q}: {e}"))?;
        let at = |j: i64| if j < 0 { Rational::zero() } else { t.pmf(j as u32) };
        for x in 1..q.support_max() {
            let xi = x as i64;
            let r = recurrence_residual(q, x, &at(xi - 1), &at(xi), &at(xi + 1)).map_err(|e| format!("{q}: {e}"))?;
            ensure(r.is_zero(), || format!("{q} x={x}: residual {r}"))?;
        }
    }
    let q = p(4, 2, 2, 1);
    let t = build_table(&q).map_err(|e| e.to_string())?;
    let printed = recurrence_residual_with(RecurrenceForm::Printed, &q, 1, &t.pmf(0), &t.pmf(1), &t.pmf(2))
        .map_err(|e| e.to_string())?;
    ensure(!printed.is_zero(), || "printed fractions unexpectedly satisfied at (4,2,2,1) x=1".into())?;
    Ok(format!("corrected residual 0; printed residual at (4,2,2,1) x=1 is {printed}"))
}

fn casimir(sample: &[Params]) -> Outcome {
    for q in sample.iter().filter(|q| q.n > 0) {
        let (_, res) = casimir_check(q).map_err(|e| format!("{q}: {e}"))?;
        ensure(res.is_zero(), || format!("{q}: residual {res}"))?;
        let (spectral, closed) = casimir_bruteforce(q).map_err(|e| format!("{q}: {e}"))?;
        ensure(spectral == closed, || format!("{q}: spectral {spectral} vs {closed}"))?;
    }
    Ok("variance identity and spectral sum exact".into())
}

fn half_filling_mean() -> Outcome {
    let mut count = 0;
    for m in 0..=12u32 {
        for k in 0..=2 * m {
            for l in k.saturating_sub(m)..=k.min(m) {
                let q = p(2 * m, m, k, l);
                let e = expectation_half(m, k, l).map_err(|e| format!("{q}: {e}"))?;
                let t = build_table(&q).map_err(|e| format!("{q}: {e}"))?;
                ensure(e == t.mean(), || format!("{q}: closed {e}, table {}", t.mean()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} tuples with n = 2m, m <= 12"))
}

fn type_one_limit() -> Outcome {
    let (xi, k, l) = (0.3, 4, 2);
    let lim = TypeILimit::new(xi, k, l).map_err(|e| e.to_string())?;
    let mut errs = Vec::new();
    for n in [50u32, 100, 200, 400] {
        let m = (xi * n as f64).round() as u32;
        let t = build_table(&p(n, m, k, l)).map_err(|e| e.to_string())?;
        let probs = t.to_f64();
        let err = (0..=k as usize)
            .map(|x| (probs.get(x).copied().unwrap_or(0.0) - lim.q_table[x]).abs())
            .fold(0.0, f64::max);
        errs.push(err);
    }
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let mean_gap = (lim.mean() - lim.mean_closed()).abs();
    let detail = format!("sup errors {}, ratios {ratios:.3?}, mean gap {mean_gap:.1e}", list(&errs, |e| format!("{e:.3e}")));
    ensure(ratios.iter().all(|r| (1.5..=2.7).contains(r)), || detail.clone())?;
    ensure(mean_gap <= 1e-12, || detail.clone())?;
    Ok(detail)
}

fn clt() -> Outcome {
    let r = Ratios::from_xi_kappa_alpha(0.4, 0.6, 0.3).map_err(|e| e.to_string())?;
    let prof = limit_profile(&r);
    let sigma = prof.sigma().ok_or("no sigma")?;
    let n = 1000;
    let t = build_table(&r.params_at(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let ks = kolmogorov_distance(n, &prof, &t.to_f64()).map_err(|e| e.to_string())?;
    let detail = format!("mu {:.6}, sigma {sigma:.5}, KS {ks:.4} at n = {n}", prof.mu);
    ensure((prof.mu - 0.3).abs() <= 1e-12 && (sigma - 0.33541).abs() <= 5e-6, || detail.clone())?;
    ensure(ks <= 0.05, || detail.clone())?;
    Ok(detail)
}

fn second_order() -> Outcome {
    let r = Ratios::from_xi_kappa_alpha(0.4, 0.6, 0.3).map_err(|e| e.to_string())?;
    let prof = limit_profile(&r);
    let (phi, s2) = (prof.phi.ok_or("no phi")?, prof.sigma_sq.ok_or("no sigma")?);
    let n = 2000;
    let t = build_table(&r.params_at(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let (mean, var) = (to_f64(&t.mean()), to_f64(&t.variance()));
    let d_mean = mean - n as f64 * prof.mu - phi;
    let d_var = var / n as f64 - s2;
    let detail = format!("phi {phi}, E - n mu - phi = {d_mean:.2e}, V/n - sigma^2 = {d_var:.2e}");
    ensure((phi + 0.46875).abs() <= 1e-12, || detail.clone())?;
    ensure(d_mean.abs() <= 0.05 && d_var.abs() <= 0.01, || detail.clone())?;
    Ok(detail)
}

fn degenerate_limits() -> Outcome {
    let mut fails = Vec::new();

    // M = m - l = 0 with xi = 1/4.
    let q = p(400, 100, 100, 100);
    let r = Ratios::from_xi_kappa_alpha(0.25, 0.25, 0.25).map_err(|e| e.to_string())?;
    let DegenerateLimit::Geometric { mu } = DegenerateLimit::of(&r).map_err(|e| e.to_string())? else {
        return Err("expected the geometric regime".into());
    };
    let probs = build_table(&q).map_err(|e| e.to_string())?.to_f64();
    let edge = (400.0 * mu).round() as usize;
    let target = (1.0 - mu) / mu;
    let rel: Vec<f64> = (0..=5).map(|i| probs[edge - i] / probs[edge - i - 1] / target - 1.0).collect();
    if rel.iter().any(|e| e.abs() > 0.01) {
        fails.push("geometric");
    }

    let n = 10_000u32;
    let probs = build_table(&p(n, n / 2, n / 2, n / 2)).map_err(|e| e.to_string())?.to_f64();
    let sq = (n as f64).sqrt();
    let cdf_err: Vec<f64> = [0.5, 1.0, 1.5]
        .iter()
        .map(|&t: &f64| {
            let from = (n as f64 / 2.0 - t * sq).ceil().max(0.0) as usize;
            tail_sum(&probs, from) - (1.0 - (-2.0 * t * t).exp())
        })
        .collect();
    if cdf_err.iter().any(|e| e.abs() > 0.02) {
        fails.push("rayleigh cdf");
    }
    let mean: f64 = probs.iter().enumerate().map(|(x, v)| x as f64 * v).sum();
    let shift = -(n as f64 * std::f64::consts::PI / 8.0).sqrt();
    let mean_rel = (mean - n as f64 / 2.0) / shift - 1.0;
    if mean_rel.abs() > 0.02 {
        fails.push("rayleigh mean");
    }

    let detail = format!(
        "geometric ratio rel err i=0..5 {}; rayleigh cdf err {}, mean rel err {mean_rel:+.4}",
        list(&rel, |e| format!("{e:+.4}")),
        list(&cdf_err, |e| format!("{e:+.1e}"))
    );
    if fails.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{} out of tolerance: {detail}", fails.join(", ")))
    }
}

fn rate_functions() -> Outcome {
    let r = Ratios::new(0.3, 0.2, 0.0, 0.5).map_err(|e| e.to_string())?;
    let rf = RateFunctions::new(&r).map_err(|e| e.to_string())?;
    let f_mu = rf.f(rf.mu).map_err(|e| e.to_string())?;
    let h = 1e-4;
    let d1 = (rf.u(h) - rf.u(-h)) / (2.0 * h);
    let d2 = (rf.u(h) - 2.0 * rf.u(0.0) + rf.u(-h)) / (h * h);
    let mut fails = Vec::new();
    if f_mu.abs() > 1e-10 {
        fails.push("f(mu)");
    }
    if (d1 - rf.mu).abs() > 1e-6 {
        fails.push("u'(0)");
    }
    if (d2 - rf.sigma_sq).abs() > 1e-5 {
        fails.push("u''(0)");
    }

    let big_r = rf.mu + 0.05;
    let rate = rf.upper_tail_rate(big_r);
    let mut rel = Vec::new();
    for n in [200u32, 400, 800] {
        let probs = build_table(&r.params_at(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.to_f64();
        let from = (big_r * n as f64).ceil() as usize;
        let emp = -tail_sum(&probs, from).ln() / n as f64;
        rel.push((emp - rate).abs() / rate);
    }
    if !rel.windows(2).all(|w| w[1] < w[0]) {
        fails.push("tail monotone");
    }
    if rel[2] > 0.2 {
        fails.push("tail within 20% at n=800");
    }
    let detail = format!(
        "|f(mu)| {:.1e}, u' err {:.1e}, u'' err {:.1e}; tail rate {rate:.6}, rel err n=200,400,800 {rel:.3?}",
        f_mu.abs(),
        (d1 - rf.mu).abs(),
        (d2 - rf.sigma_sq).abs()
    );
    if fails.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{} out of tolerance: {detail}", fails.join(", ")))
    }
}

fn q_analogue() -> Outcome {
    let points = Params::enumerate(8);
    let qs = [frac(1, 2), int(1), int(2), int(3)];
    for pt in &points {
        // The q-side lives on m <= n-m; the other half is reached through the mirror.
        let red = pt.reduced();
        let classical = build_table(pt).map_err(|e| format!("{pt}: {e}"))?;
        for q in &qs {
            let ctx = QContext::new(q.clone(), red).map_err(|e| format!("{pt}: {e}"))?;
            let hahn = q_table(&ctx, QRoute::Hahn).map_err(|e| format!("{pt} q={q}: {e}"))?;
            let racah = q_table(&ctx, QRoute::Racah).map_err(|e| format!("{pt} q={q}: {e}"))?;
            ensure(hahn == racah, || format!("{pt} q={q}: routes differ"))?;
            let total: Rational = racah.iter().sum();
            ensure(total.is_one(), || format!("{pt} q={q}: s(m|q) = {total}"))?;
            if q.is_one() {
                ensure(racah == classical.probabilities(), || format!("{pt}: q=1 differs from classical"))?;
            }
        }
    }
    Ok(format!("{} tuples x {} values of q", points.len(), qs.len()))
}

fn entropy() -> Outcome {
    let q = p(4, 2, 2, 1);
    let s = entropy_avg(&q).map_err(|e| e.to_string())?;
    let closed = 3f64.ln() / 3.0 + 6f64.ln() / 2.0 + 12f64.ln() / 6.0;
    let r = Ratios::new(0.3, 0.2, 0.0, 0.5).map_err(|e| e.to_string())?;
    let prof = limit_profile(&r);
    let n = 500;
    let t = build_table(&r.params_at(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let lead = entropy_of_table(&t) / n as f64 - binary_entropy(prof.mu);
    let hs = h_spectral(&q, 0.4).map_err(|e| e.to_string())?;
    let detail = format!(
        "S(4,2,2,1) err {:.1e}; S/n - h(mu) at n=500 {lead:+.4}; H_s^0.4 - ln 6 = {:.1e}",
        (s - closed).abs(),
        hs - 6f64.ln()
    );
    ensure((s - closed).abs() <= 1e-12, || detail.clone())?;
    ensure(lead.abs() <= 0.05, || detail.clone())?;
    ensure((hs - 6f64.ln()).abs() <= 1e-12, || detail.clone())?;
    Ok(detail)
}

fn main() -> ExitCode {
    let sample = sample_small();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("exact route agreement, n <= 8", Box::new(route_agreement)),
        ("normalization and cdf", Box::new(|| normalization(&sample))),
        ("support law", Box::new(|| support(&sample))),
        ("corrected recurrence", Box::new(|| recurrence(&sample))),
        ("corrected Casimir identity", Box::new(|| casimir(&sample))),
        ("n = 2m closed-form mean", Box::new(half_filling_mean)),
        ("Type I limit", Box::new(type_one_limit)),
        ("Type II CLT", Box::new(clt)),
        ("second-order mean and variance", Box::new(second_order)),
        ("degenerate limits", Box::new(degenerate_limits)),
        ("rate functions", Box::new(rate_functions)),
        ("q-analogue", Box::new(q_analogue)),
        ("entropy", Box::new(entropy)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {:>2} {name} [{secs:.1}s]: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.1}s]: {d}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
