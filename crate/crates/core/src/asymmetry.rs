//! Entropic asymmetry measures of `Xi` under the `S_n` twirl.
//!
//! The twirled state is block diagonal with `p(x)` spread uniformly over
//! `dim V_(n-x,x)`, so every quantity reduces to the table plus dimensions.
//! Logarithms are natural.

use num_traits::{Signed, Zero};

use crate::asympt::{binary_entropy, limit_profile, ratios_from_params, RateFunctions, Ratios, TypeILimit};
use crate::dist::{build_table, two_row_dim, DistTable, Params};
use crate::error::{Error, Result};
use crate::exact::{from_f64, ln_big, ln_rational, Rational};

/// `ln dim V_(n-x,x) - ln p(x)` for every `x` with `p(x) > 0`, with its mass.
fn surprisal_levels(table: &DistTable) -> Vec<(Rational, f64, Rational)> {
    let n = table.params().n;
    table
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_positive())
        .map(|(x, p)| {
            let dim = two_row_dim(n, x as u32).expect("x within table").value;
            let ratio = Rational::from_integer(dim) / p;
            let level = ln_rational(&ratio);
            (ratio, level, p.clone())
        })
        .collect()
}

/// Von Neumann entropy of the twirled state, from a precomputed table.
pub fn entropy_of_table(table: &DistTable) -> f64 {
    surprisal_levels(table)
        .iter()
        .map(|(_, level, p)| crate::exact::to_f64(p) * level)
        .sum()
}

pub fn entropy_avg(p: &Params) -> Result<f64> {
    Ok(entropy_of_table(&build_table(p)?))
}

/// Type I approximation `u ln n + u - ln sqrt(2 pi) - sum_x q(x)((x+1/2) ln x + ln q(x))`,
/// from Stirling's expansion of `ln C(n, x)` at fixed `x`.
///
/// Stirling is singular at `x = 0` while `ln C(n, 0) = 0` exactly, so that
/// row contributes only `-q(0) ln q(0)` and the `ln sqrt(2 pi)` offset is
/// weighted by `1 - q(0)`.
pub fn entropy_type1_approx(n: u32, xi: f64, k: u32, l: u32) -> Result<f64> {
    let limit = TypeILimit::new(xi, k, l)?;
    let u = limit.mean_closed();
    let q0 = limit.q_table[0];
    let mut sum = 0.0;
    for (x, &q) in limit.q_table.iter().enumerate() {
        if q <= 0.0 {
            continue;
        }
        let stirling = if x == 0 { 0.0 } else { (x as f64 + 0.5) * (x as f64).ln() };
        sum -= q * (stirling + q.ln());
    }
    let offset = (1.0 - q0) * (2.0 * std::f64::consts::PI).sqrt().ln();
    Ok(u * (n as f64).ln() + u - offset + sum)
}

/// Constants of the Type II entropy expansion for `gamma = 0`, `xi <= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub mu: f64,
    pub sigma_sq: f64,
    pub phi: f64,
}

fn h_prime(t: f64) -> f64 {
    ((1.0 - t) / t).ln()
}

fn h_second(t: f64) -> f64 {
    -1.0 / (t * (1.0 - t))
}

pub fn entropy_type2_constants(r: &Ratios) -> Result<EntropyConstants> {
    let rf = RateFunctions::new(r)?;
    let (a, b) = (rf.alpha, rf.beta);
    let xi = a + b;
    let mu = rf.mu;
    let h = binary_entropy;
    let rest = 1.0 - a - mu;
    let w = b / rest;
    let c1 = h(xi) + xi * h(mu / xi) - a * h(mu / a) - rest * h(w);
    let c2 = 0.5 * (a * b / (xi * xi * (1.0 - xi))).ln() + 0.5 * (1.0 - w).ln();
    let c3 = h_prime(mu / xi) - h_prime(mu / a) + h(w) - w * h_prime(w);
    let c4 = h_second(mu / xi) / (2.0 * xi) - h_second(mu / a) / (2.0 * a)
        - b * b / (2.0 * rest.powi(3)) * h_second(w);
    let c5 = -0.5 * b / (rest * (rest - b));
    let c6 = 0.25 * (1.0 / rest.powi(2) - 1.0 / (rest - b).powi(2));
    let phi = (rf.sigma_sq - mu) / (1.0 - 2.0 * mu);
    Ok(EntropyConstants { c1, c2, c3, c4, c5, c6, mu, sigma_sq: rf.sigma_sq, phi })
}

impl EntropyConstants {
    /// `n C1 + C2 + C3 phi + C4 sigma^2`.
    pub fn expansion(&self, n: u32) -> f64 {
        n as f64 * self.c1 + self.c2 + self.c3 * self.phi + self.c4 * self.sigma_sq
    }

    /// Local approximation `v(z)` of the surprisal at `x = n mu + z`.
    pub fn surprisal(&self, n: u32, z: f64) -> f64 {
        let nf = n as f64;
        self.c1 * nf + self.c2 + self.c3 * z + self.c5 * z / nf + self.c4 * z * z / nf
            + self.c6 * z * z / (nf * nf)
    }
}

/// Exact entropy next to its large-`n` approximations for one tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub exact_entropy: f64,
    /// Type I formula with `xi = m/n` and the tuple's own `k`, `l`.
    pub type1_approx: f64,
    /// `n h(mu)` at the tuple's own ratios.
    pub type2_leading: f64,
    pub constants: Option<EntropyConstants>,
}

pub fn entropy_profile(p: &Params) -> Result<EntropyProfile> {
    let table = build_table(p)?;
    let ratios = ratios_from_params(p)?.to_f64();
    let profile = limit_profile(&ratios);
    Ok(EntropyProfile {
        exact_entropy: entropy_of_table(&table),
        type1_approx: entropy_type1_approx(p.n, ratios.xi(), p.k, p.l)?,
        type2_leading: p.n as f64 * binary_entropy(profile.mu),
        constants: entropy_type2_constants(&ratios).ok(),
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::BadEpsilon(eps))
    }
}

/// Spectral entropy `H_s^eps`: the smallest surprisal level whose inclusive
/// cumulative mass exceeds `eps`.
pub fn h_spectral_table(table: &DistTable, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let mut levels = surprisal_levels(table);
    levels.sort_by(|a, b| a.0.cmp(&b.0));
    let eps = from_f64(eps);
    let mut cum = Rational::zero();
    let mut i = 0;
    while i < levels.len() {
        // Equal ratios form one atom of the surprisal distribution.
        let mut j = i;
        while j < levels.len() && levels[j].0 == levels[i].0 {
            cum += &levels[j].2;
            j += 1;
        }
        if cum > eps {
            return Ok(levels[i].1);
        }
        i = j;
    }
    unreachable!("total mass is 1 > eps")
}

pub fn h_spectral(p: &Params, eps: f64) -> Result<f64> {
    h_spectral_table(&build_table(p)?, eps)
}

/// Bounds on `ln M` from `h_lo = H_s^(eps-d1-d2)` and `h_hi = H_s^(eps+d1+2 d2)`.
pub fn distinguishability_bounds(h_lo: f64, h_hi: f64, delta1: f64, delta2: f64) -> Result<(f64, f64)> {
    if !(delta1 > 0.0 && delta2 > 0.0) {
        return Err(Error::BadDeltas(format!("need delta1, delta2 > 0, got {delta1}, {delta2}")));
    }
    let lower = h_lo - (1.0 / (delta1 * delta2)).ln();
    let upper = h_hi + (1.0 / (delta1 * delta2 * delta2)).ln();
    Ok((lower, upper))
}

/// The same bounds with both spectral entropies evaluated on `table`.
pub fn distinguishability(table: &DistTable, eps: f64, delta1: f64, delta2: f64) -> Result<(f64, f64)> {
    check_eps(eps)?;
    let lo = eps - delta1 - delta2;
    let hi = eps + delta1 + 2.0 * delta2;
    if !(delta1 > 0.0 && delta2 > 0.0 && lo > 0.0 && hi < 1.0) {
        return Err(Error::BadDeltas(format!(
            "shifted levels {lo} and {hi} must lie in (0,1) with positive deltas"
        )));
    }
    distinguishability_bounds(h_spectral_table(table, lo)?, h_spectral_table(table, hi)?, delta1, delta2)
}

/// Crude cap `ln sum_x dim V_(n-x,x)` on the entropy.
pub fn entropy_cap(n: u32) -> f64 {
    let total = (0..=n / 2)
        .map(|x| two_row_dim(n, x).expect("x <= n/2").value)
        .sum();
    ln_big(&total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: i64, m: i64, k: i64, l: i64) -> Params {
        Params::new(n, m, k, l).unwrap()
    }

    #[test]
    fn entropy_examples() {
        let expect = 3f64.ln() / 3.0 + 6f64.ln() / 2.0 + 12f64.ln() / 6.0;
        let s = entropy_avg(&params(4, 2, 2, 1)).unwrap();
        assert!((s - expect).abs() <= 1e-12);
        assert!((s - 1.676235).abs() <= 1e-6);
        assert_eq!(entropy_avg(&params(6, 3, 0, 0)).unwrap(), 0.0);
        assert!((entropy_avg(&params(6, 3, 3, 3)).unwrap() - 20f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn entropy_is_symmetric_and_capped() {
        for p in Params::enumerate(10) {
            let s = entropy_avg(&p).unwrap();
            assert!(s >= 0.0 && s <= entropy_cap(p.n) + 1e-12, "{p}");
            assert!((s - entropy_avg(&p.mirror()).unwrap()).abs() <= 1e-12, "{p}");
        }
    }

    #[test]
    fn type1_approx_examples() {
        assert_eq!(entropy_type1_approx(50, 0.3, 0, 0).unwrap(), 0.0);
        let mut last = f64::INFINITY;
        for n in [100u32, 200, 400] {
            let exact = entropy_avg(&params(n as i64, n as i64 / 2, 2, 1)).unwrap();
            let gap = (exact - entropy_type1_approx(n, 0.5, 2, 1).unwrap()).abs();
            assert!(gap < last, "n={n}");
            last = gap;
        }
        assert!(last <= 0.1);
    }

    #[test]
    fn type2_constants() {
        let c = entropy_type2_constants(&Ratios::new(0.3, 0.2, 0.0, 0.5).unwrap()).unwrap();
        assert!((c.c1 - binary_entropy(c.mu)).abs() <= 1e-12);
        let small = entropy_type2_constants(&Ratios::new(1e-6, 0.2, 0.0, 0.8 - 1e-6).unwrap()).unwrap();
        assert!(small.mu < 1e-5 && small.c1 < 1e-4);
        assert!(entropy_type2_constants(&Ratios::new(0.3, 0.1, 0.3, 0.3).unwrap()).is_err());
    }

    #[test]
    fn spectral_examples() {
        let p = params(4, 2, 2, 1);
        assert!((h_spectral(&p, 0.4).unwrap() - 6f64.ln()).abs() <= 1e-15);
        assert!((h_spectral(&p, 0.1).unwrap() - 3f64.ln()).abs() <= 1e-15);
        assert!((h_spectral(&p, 0.9).unwrap() - 12f64.ln()).abs() <= 1e-15);
        assert_eq!(h_spectral(&p, 1.0).unwrap_err(), Error::BadEpsilon(1.0));
        assert_eq!(h_spectral(&p, 0.0).unwrap_err(), Error::BadEpsilon(0.0));
    }

    #[test]
    fn distinguishability_examples() {
        let (lo, hi) = distinguishability_bounds(1.0, 1.0, 0.05, 0.05).unwrap();
        assert!((1.0 - lo - 400f64.ln()).abs() <= 1e-12);
        assert!((hi - 1.0 - 8000f64.ln()).abs() <= 1e-12);
        let table = build_table(&params(4, 2, 2, 1)).unwrap();
        let (lo, hi) = distinguishability(&table, 0.5, 0.05, 0.05).unwrap();
        assert!((lo - (6f64.ln() - 400f64.ln())).abs() <= 1e-12);
        assert!(lo <= hi);
        assert!(matches!(distinguishability(&table, 0.05, 0.05, 0.05), Err(Error::BadDeltas(_))));
        assert!(matches!(distinguishability_bounds(0.0, 0.0, 0.0, 0.1), Err(Error::BadDeltas(_))));
    }
}
