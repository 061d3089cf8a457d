//! Large-`n` behaviour at fixed ratios.
//!
//! Type I keeps `k`, `l` fixed while `m/n -> xi`; Type II fixes all four
//! ratios `(alpha, beta, gamma, delta) = (l, m-l, k-l, n-m-k+l)/n`.
//! Everything here is `f64`; exact tables enter only through comparisons.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::dist::Params;
use crate::error::{Error, Result};
use crate::exact::{frac, Rational};

/// Ratio comparisons treat differences below this as equality.
pub const RATIO_TOL: f64 = 1e-12;

/// Type II ratios `(alpha, beta, gamma, delta)`, summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratios {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Ratios {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let all = [alpha, beta, gamma, delta];
        if all.iter().any(|v| !v.is_finite() || *v < -RATIO_TOL) {
            return Err(Error::BadRatios(format!("negative or non-finite entry in {all:?}")));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::BadRatios(format!("alpha+beta+gamma+delta = {sum}, expected 1")));
        }
        let c = |v: f64| v.max(0.0);
        Ok(Ratios { alpha: c(alpha), beta: c(beta), gamma: c(gamma), delta: c(delta) })
    }

    /// From `xi = m/n`, `kappa = k/n` and `alpha = l/n`.
    pub fn from_xi_kappa_alpha(xi: f64, kappa: f64, alpha: f64) -> Result<Self> {
        Self::new(alpha, xi - alpha, kappa - alpha, 1.0 - xi - kappa + alpha)
    }

    pub fn xi(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn kappa(&self) -> f64 {
        self.alpha + self.gamma
    }

    /// The relabelling `(n,m,k,l) -> (n,n-m,k,k-l)` seen on ratios.
    pub fn swapped(&self) -> Ratios {
        Ratios { alpha: self.gamma, beta: self.delta, gamma: self.alpha, delta: self.beta }
    }

    /// Nearest admissible integer tuple at size `n` (`m`, `k`, `l` rounded).
    pub fn params_at(&self, n: u32) -> Result<Params> {
        let nf = n as f64;
        let m = (self.xi() * nf).round() as i64;
        let k = (self.kappa() * nf).round() as i64;
        let l = (self.alpha * nf).round() as i64;
        Params::new(n as i64, m, k, l)
    }
}

/// Exact ratios of a concrete tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRatios {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

impl ExactRatios {
    pub fn to_f64(&self) -> Ratios {
        let f = crate::exact::to_f64;
        Ratios {
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: f(&self.gamma),
            delta: f(&self.delta),
        }
    }
}

pub fn ratios_from_params(p: &Params) -> Result<ExactRatios> {
    if p.n == 0 {
        return Err(Error::EmptySystem);
    }
    let n = p.n as i64;
    Ok(ExactRatios {
        alpha: frac(p.l as i64, n),
        beta: frac(p.big_m() as i64, n),
        gamma: frac(p.big_k() as i64, n),
        delta: frac(p.big_n() as i64, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `alpha+gamma`, `beta`, `delta` all positive: Gaussian fluctuations.
    GenericA,
    /// Either no fluctuation at all or a geometric law near the edge.
    DegenerateB,
    /// `beta*delta = 0` at `xi = 1/2`: Rayleigh fluctuations of order `sqrt(n)`.
    UndefinedC,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitProfile {
    pub ratios: Ratios,
    pub eta: f64,
    pub d: f64,
    pub mu: f64,
    pub nu: f64,
    pub sigma_sq: Option<f64>,
    pub phi: Option<f64>,
    pub regime: Regime,
}

impl LimitProfile {
    pub fn sigma(&self) -> Option<f64> {
        self.sigma_sq.map(f64::sqrt)
    }
}

fn is_zero(v: f64) -> bool {
    v.abs() <= RATIO_TOL
}

pub fn classify(r: &Ratios) -> Regime {
    let bd_zero = is_zero(r.beta) || is_zero(r.delta);
    if !is_zero(r.kappa()) && !bd_zero {
        Regime::GenericA
    } else if bd_zero && is_zero(r.xi() - 0.5) {
        Regime::UndefinedC
    } else {
        Regime::DegenerateB
    }
}

pub fn limit_profile(r: &Ratios) -> LimitProfile {
    let Ratios { alpha, beta, gamma, delta } = *r;
    let eta = alpha * gamma + alpha * delta + beta * gamma;
    let d = (1.0 - 4.0 * eta).clamp(0.0, 1.0);
    let root = d.sqrt();
    let mu = (1.0 - root) / 2.0;
    let regime = classify(r);
    let sigma_sq = (d > RATIO_TOL).then(|| (alpha + gamma) * beta * delta / d);
    let phi = match (regime, sigma_sq) {
        (Regime::GenericA, Some(s)) => Some((s - mu) / (1.0 - 2.0 * mu)),
        _ => None,
    };
    LimitProfile { ratios: *r, eta, d, mu, nu: (1.0 + root) / 2.0, sigma_sq, phi, regime }
}

/// `mu` from the series `sum_r Catalan(r) eta^(r+1)`, valid for `eta < 1/4`.
pub fn mu_catalan_series(eta: f64, terms: usize) -> f64 {
    let mut term = eta;
    let mut sum = 0.0;
    for r in 0..terms {
        sum += term;
        let r = r as f64;
        term *= eta * 2.0 * (2.0 * r + 1.0) / (r + 2.0);
    }
    sum
}

/// The Type I limit law: binomial `(k-l, xi)` plus binomial `(l, 1-xi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeILimit {
    pub xi: f64,
    pub k: u32,
    pub l: u32,
    pub q_table: Vec<f64>,
}

fn binom_f64(n: u32, r: u32) -> f64 {
    if r > n {
        0.0
    } else {
        statrs::function::factorial::binomial(n as u64, r as u64)
    }
}

/// `q(x | xi; k, l)` from the closed sum.
pub fn type1_pmf(xi: f64, k: u32, l: u32, x: u32) -> f64 {
    assert!(l <= k, "type1_pmf needs l <= k");
    if x > k {
        return 0.0;
    }
    let kk = k - l;
    let lo = x.saturating_sub(kk);
    let hi = x.min(l);
    if lo > hi {
        return 0.0;
    }
    let eta = 1.0 - xi;
    // Powers are regrouped per term so that xi in {0, 1} never forms 0 * inf.
    (lo..=hi)
        .map(|u| {
            let a = x - u;
            binom_f64(kk, a)
                * binom_f64(l, u)
                * xi.powi(a as i32)
                * eta.powi((kk - a) as i32)
                * eta.powi(u as i32)
                * xi.powi((l - u) as i32)
        })
        .sum()
}

impl TypeILimit {
    pub fn new(xi: f64, k: u32, l: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::BadRatios(format!("xi = {xi} outside [0,1]")));
        }
        if l > k {
            return Err(Error::OutOfCone("l <= k".into()));
        }
        let q_table = (0..=k).map(|x| type1_pmf(xi, k, l, x)).collect();
        Ok(TypeILimit { xi, k, l, q_table })
    }

    pub fn mean(&self) -> f64 {
        self.q_table.iter().enumerate().map(|(x, q)| x as f64 * q).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.q_table.iter().enumerate().map(|(x, q)| (x as f64 - m).powi(2) * q).sum()
    }

    pub fn mean_closed(&self) -> f64 {
        (self.k - self.l) as f64 * self.xi + self.l as f64 * (1.0 - self.xi)
    }

    pub fn variance_closed(&self) -> f64 {
        self.k as f64 * self.xi * (1.0 - self.xi)
    }
}

fn require_generic(profile: &LimitProfile) -> Result<f64> {
    match (profile.regime, profile.sigma_sq) {
        (Regime::GenericA, Some(s)) => Ok(s),
        (regime, _) => Err(Error::RegimeMismatch(format!("needs GenericA, ratios are {regime:?}"))),
    }
}

/// Gaussian approximation `Psi(x)` to the pmf at size `n`.
pub fn normal_density(n: u32, profile: &LimitProfile, x: f64) -> Result<f64> {
    let s = require_generic(profile)?;
    let var = n as f64 * s;
    let z = x - n as f64 * profile.mu;
    Ok((-z * z / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
}

/// Gaussian approximation to `P[X <= y]`.
pub fn normal_cdf(n: u32, profile: &LimitProfile, y: f64) -> Result<f64> {
    let s = require_generic(profile)?;
    let normal = Normal::new(n as f64 * profile.mu, (n as f64 * s).sqrt())
        .map_err(|e| Error::DomainError(e.to_string()))?;
    Ok(normal.cdf(y))
}

/// `sup_y |F_n(y) - Phi(y)|` over the jump points of a float pmf on `0..`.
pub fn kolmogorov_distance(n: u32, profile: &LimitProfile, pmf: &[f64]) -> Result<f64> {
    let mut cum = 0.0;
    let mut worst: f64 = 0.0;
    for (x, p) in pmf.iter().enumerate() {
        let phi = normal_cdf(n, profile, x as f64)?;
        // Left limit at the jump, then the value after it.
        worst = worst.max((cum - phi).abs());
        cum += p;
        worst = worst.max((cum - phi).abs());
    }
    Ok(worst)
}

/// Limit laws when `beta*delta = 0`, measured from the edge `n*mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegenerateLimit {
    /// `P[X = n*mu - i] -> (mu/(1-mu))^i (1-2mu)/(1-mu)`.
    Geometric { mu: f64 },
    /// `(n/2 - X)/sqrt(n)` has density `4 s exp(-2 s^2)`.
    Rayleigh,
}

impl DegenerateLimit {
    pub fn of(r: &Ratios) -> Result<Self> {
        if !(is_zero(r.beta) || is_zero(r.delta)) {
            return Err(Error::RegimeMismatch("degenerate limits need beta*delta = 0".into()));
        }
        let xi = r.xi();
        if is_zero(xi - 0.5) {
            Ok(DegenerateLimit::Rayleigh)
        } else {
            Ok(DegenerateLimit::Geometric { mu: xi.min(1.0 - xi) })
        }
    }

    /// Limit mass at distance `i` below the edge.
    pub fn geometric_mass(&self, i: u32) -> Result<f64> {
        match *self {
            DegenerateLimit::Geometric { mu } => {
                Ok((mu / (1.0 - mu)).powi(i as i32) * (1.0 - 2.0 * mu) / (1.0 - mu))
            }
            DegenerateLimit::Rayleigh => Err(Error::RegimeMismatch("Rayleigh limit has no atoms".into())),
        }
    }

    /// `int_t^u 4 s exp(-2 s^2) ds`; `u` may be infinite.
    pub fn rayleigh_increment(&self, t: f64, u: f64) -> Result<f64> {
        match self {
            DegenerateLimit::Rayleigh => {
                if t < 0.0 || u < t {
                    return Err(Error::DomainError(format!("need 0 <= t <= u, got t={t}, u={u}")));
                }
                Ok((-2.0 * t * t).exp() - (-2.0 * u * u).exp())
            }
            DegenerateLimit::Geometric { .. } => {
                Err(Error::RegimeMismatch("geometric limit is discrete".into()))
            }
        }
    }
}

/// Rayleigh distribution function `1 - exp(-2 t^2)` for `t >= 0`.
pub fn rayleigh_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        1.0 - (-2.0 * t * t).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvKind {
    Gaussian,
    Geometric,
    Rayleigh,
    PointMass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvApprox {
    pub mean: f64,
    pub variance: f64,
    pub kind: EvKind,
}

/// Leading behaviour of `E[X]` and `V[X]` at size `n`.
///
/// The Rayleigh branch drops the `o(sqrt n)` remainder of the mean.
pub fn ev_asymptotics(r: &Ratios, n: u32) -> EvApprox {
    let profile = limit_profile(r);
    let nf = n as f64;
    let mu = profile.mu;
    match profile.regime {
        Regime::GenericA => EvApprox {
            mean: nf * mu + profile.phi.expect("phi exists in GenericA"),
            variance: nf * profile.sigma_sq.expect("sigma exists in GenericA"),
            kind: EvKind::Gaussian,
        },
        Regime::UndefinedC => EvApprox {
            mean: nf / 2.0 - (nf * std::f64::consts::PI / 8.0).sqrt(),
            variance: nf * (0.5 - std::f64::consts::PI / 8.0),
            kind: EvKind::Rayleigh,
        },
        Regime::DegenerateB if is_zero(mu) => {
            EvApprox { mean: 0.0, variance: 0.0, kind: EvKind::PointMass }
        }
        Regime::DegenerateB => EvApprox {
            mean: nf * mu - mu / (1.0 - 2.0 * mu),
            variance: mu * (1.0 - mu) / (1.0 - 2.0 * mu).powi(2),
            kind: EvKind::Geometric,
        },
    }
}

/// Binary entropy in nats; `h(0) = h(1) = 0`.
pub fn binary_entropy(t: f64) -> f64 {
    let term = |v: f64| if v <= 0.0 { 0.0 } else { -v * v.ln() };
    term(t) + term(1.0 - t)
}

/// Golden-section maximiser of a unimodal `g` on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > tol {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    (a + b) / 2.0
}

/// Exponential profile of the pmf when `gamma = 0`: `p(tn) ~ exp(n f(t))`.
///
/// Tuples with `alpha = 0` are handled through the relabelling symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFunctions {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub mu: f64,
    pub sigma_sq: f64,
}

impl RateFunctions {
    pub fn new(r: &Ratios) -> Result<Self> {
        let r = if is_zero(r.gamma) {
            *r
        } else if is_zero(r.alpha) {
            r.swapped()
        } else {
            return Err(Error::RegimeMismatch("rate functions need gamma = 0 or alpha = 0".into()));
        };
        if is_zero(r.alpha) || is_zero(r.beta) || is_zero(r.delta) {
            return Err(Error::RegimeMismatch("rate functions need alpha*beta*delta > 0".into()));
        }
        if r.xi() > 0.5 + RATIO_TOL {
            return Err(Error::RegimeMismatch(format!("rate functions need xi <= 1/2, got {}", r.xi())));
        }
        let profile = limit_profile(&r);
        Ok(RateFunctions {
            alpha: r.alpha,
            beta: r.beta,
            delta: r.delta,
            mu: profile.mu,
            sigma_sq: profile.sigma_sq.expect("D > 0 when alpha*beta*delta > 0"),
        })
    }

    fn xi(&self) -> f64 {
        self.alpha + self.beta
    }

    /// Open interval `(0, t_max)` on which `f` is smooth.
    pub fn t_max(&self) -> f64 {
        self.alpha.min(self.delta)
    }

    fn check(&self, t: f64) -> Result<()> {
        if t > 0.0 && t < self.t_max() {
            Ok(())
        } else {
            Err(Error::DomainError(format!("t = {t} outside (0, {})", self.t_max())))
        }
    }

    fn f_unchecked(&self, t: f64) -> f64 {
        let (a, b, xi) = (self.alpha, self.beta, self.xi());
        let h = binary_entropy;
        h(t) - h(xi) + a * h(t / a) - xi * h(t / xi) + (1.0 - a - t) * h(b / (1.0 - a - t))
    }

    pub fn f(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.f_unchecked(t))
    }

    pub fn f_prime(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let (a, d, xi) = (self.alpha, self.delta, self.xi());
        Ok(((1.0 - t) * (d - t) * (a - t) / (t * (1.0 - a - t) * (xi - t))).ln())
    }

    pub fn f_second(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let (a, d, xi) = (self.alpha, self.delta, self.xi());
        Ok(-1.0 / (1.0 - t) - 1.0 / (d - t) - 1.0 / (a - t) - 1.0 / t
            + 1.0 / (1.0 - a - t)
            + 1.0 / (xi - t))
    }

    /// `argmax_t (s t + f(t))`.
    pub fn maximiser(&self, s: f64) -> f64 {
        let hi = self.t_max();
        let edge = hi * 1e-15;
        let mut t = golden_max(|t| s * t + self.f_unchecked(t), edge, hi - edge, 1e-12);
        // Newton on f'(t) + s = 0 removes the golden-section plateau error.
        for _ in 0..3 {
            let (Ok(g), Ok(g2)) = (self.f_prime(t), self.f_second(t)) else { break };
            let next = t - (g + s) / g2;
            if !(next > 0.0 && next < hi) {
                break;
            }
            t = next;
        }
        t
    }

    /// Scaled cumulant generating function `u(s) = max_t (s t + f(t))`.
    pub fn u(&self, s: f64) -> f64 {
        let t = self.maximiser(s);
        s * t + self.f_unchecked(t)
    }

    /// `max_{s >= 0} (s R - u(s))`, the decay rate of `P[X/n >= R]`.
    pub fn upper_tail_rate(&self, r: f64) -> f64 {
        self.tail_rate(r, 1.0)
    }

    /// `max_{s <= 0} (s R - u(s))`, the decay rate of `P[X/n <= R]`.
    pub fn lower_tail_rate(&self, r: f64) -> f64 {
        self.tail_rate(r, -1.0)
    }

    fn tail_rate(&self, r: f64, sign: f64) -> f64 {
        let g = |s: f64| s * r - self.u(s);
        let mut bound = 1.0;
        while bound < 1e6 && g(sign * 2.0 * bound) > g(sign * bound) {
            bound *= 2.0;
        }
        let (a, b) = if sign > 0.0 { (0.0, 2.0 * bound) } else { (-2.0 * bound, 0.0) };
        let s = golden_max(g, a, b, 1e-10);
        g(s).max(g(0.0))
    }
}
