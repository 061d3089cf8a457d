//! The distribution `p(x | n,m,k,l)`: two exact presentations, the
//! cumulative sum, a three-term recurrence, moments and special cases.
//!
//! Every formula below assumes `m <= n - m`. Inputs with `m > n - m` are
//! mapped through `(n,m,k,l) -> (n,n-m,k,k-l)`, which leaves the pmf
//! unchanged.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, binom, int, HypSpec, Rational};
use crate::exec::Exec;

/// A point `(n, m, k, l)` of the admissible cone
/// `m, k <= n`, `m + k - n <= l <= min(m, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub l: u32,
}

impl Params {
    /// Validate a raw 4-tuple; the error names the violated inequality.
    pub fn new(n: i64, m: i64, k: i64, l: i64) -> Result<Self> {
        let checks: [(bool, &str); 8] = [
            (n >= 0, "n >= 0"),
            (m >= 0, "m >= 0"),
            (k >= 0, "k >= 0"),
            (l >= 0, "l >= 0"),
            (m <= n, "m <= n"),
            (k <= n, "k <= n"),
            (l <= m.min(k), "l <= min(m, k)"),
            (m + k - n <= l, "m + k - n <= l"),
        ];
        if let Some((_, name)) = checks.iter().find(|(ok, _)| !ok) {
            return Err(Error::OutOfCone(format!("{name} (n={n}, m={m}, k={k}, l={l})")));
        }
        let limit = u32::MAX as i64;
        if n > limit {
            return Err(Error::OutOfCone(format!("n <= {limit}")));
        }
        Ok(Params { n: n as u32, m: m as u32, k: k as u32, l: l as u32 })
    }

    /// `M = m - l`
    pub fn big_m(&self) -> u32 {
        self.m - self.l
    }

    /// `N = n - m - k + l`
    pub fn big_n(&self) -> u32 {
        self.n + self.l - self.m - self.k
    }

    /// `K = k - l`
    pub fn big_k(&self) -> u32 {
        self.k - self.l
    }

    /// The symmetric partner `(n, n-m, k, k-l)`.
    pub fn mirror(&self) -> Params {
        Params { n: self.n, m: self.n - self.m, k: self.k, l: self.k - self.l }
    }

    /// Representative with `m <= n - m`.
    pub fn reduced(&self) -> Params {
        if 2 * self.m > self.n {
            self.mirror()
        } else {
            *self
        }
    }

    /// Largest `x` with `p(x) > 0`: `min(m, n-m, k)`.
    pub fn support_max(&self) -> u32 {
        self.m.min(self.n - self.m).min(self.k)
    }

    /// `floor(n/2)`, the last row index.
    pub fn max_row(&self) -> u32 {
        self.n / 2
    }

    /// Every point of the cone with `n <= n_max`, in lexicographic order.
    pub fn enumerate(n_max: u32) -> Vec<Params> {
        let mut out = Vec::new();
        for n in 0..=n_max {
            for m in 0..=n {
                for k in 0..=n {
                    let lo = (m + k).saturating_sub(n);
                    for l in lo..=m.min(k) {
                        out.push(Params { n, m, k, l });
                    }
                }
            }
        }
        out
    }

    fn ni(&self) -> i64 {
        self.n as i64
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.n, self.m, self.k, self.l)
    }
}

pub fn validate_params(n: i64, m: i64, k: i64, l: i64) -> Result<Params> {
    Params::new(n, m, k, l)
}

/// Dimension of the `S_n` irrep `(n-x, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoRowDim {
    pub n: u32,
    pub x: u32,
    pub value: BigInt,
}

pub fn two_row_dim(n: u32, x: u32) -> Result<TwoRowDim> {
    if x > n / 2 {
        return Err(Error::BadRow { n, x });
    }
    let (ni, xi) = (n as i64, x as i64);
    let value = binom(ni, xi) - binom(ni, xi - 1);
    debug_assert_eq!(value.clone() * (ni - xi + 1), binom(ni, xi) * (ni - 2 * xi + 1));
    Ok(TwoRowDim { n, x, value })
}

/// `binom(n,x)/binom(n,m) * (n-2x+1)/(n-x+1)`, the factor shared by every presentation.
fn row_factor(n: i64, m: i64, x: i64) -> Rational {
    Rational::new(binom(n, x) * (n - 2 * x + 1), binom(n, m) * (n - x + 1))
}

/// Zonal spherical function of `(S_n, S_m x S_{n-m})` at the `(n-x,x)`
/// irrep and the `i`-th double coset: `3F2(-i, -x, x-n-1; -m, m-n; 1)`.
pub fn zonal_omega(n: u32, m: u32, x: u32, i: u32) -> Result<Rational> {
    let (n, m, x, i) = (n as i64, m as i64, x as i64, i as i64);
    exact::hyp_terminating(&HypSpec::unit(&[-i, -x, x - n - 1], &[-m, m - n]))
}

/// Hahn presentation: a double sum over zonal spherical functions.
pub fn pmf_hahn(p: &Params, x: u32) -> Result<Rational> {
    let p = p.reduced();
    if x > p.m || x > p.max_row() {
        return Ok(Rational::zero());
    }
    let (big_m, big_n) = (p.big_m() as i64, p.big_n() as i64);
    let mut sum = Rational::zero();
    for i in 0..=big_m.min(big_n) {
        let w = zonal_omega(p.n, p.m, x, i as u32)?;
        sum += w * Rational::from_integer(binom(big_m, i) * binom(big_n, i));
    }
    Ok(row_factor(p.ni(), p.m as i64, x as i64) * sum)
}

/// The balanced `4F3(-x, x-n-1, -M, -N; -m, m-n, -M-N; 1)` of the Racah presentation.
fn racah_series(p: &Params, x: i64, shift: i64) -> Result<Rational> {
    let (n, m) = (p.ni(), p.m as i64);
    let (big_m, big_n) = (p.big_m() as i64, p.big_n() as i64);
    exact::hyp_terminating(&HypSpec::unit(
        &[-x, x - n - 1 + shift, -big_m, -big_n],
        &[-m, m - n, -big_m - big_n],
    ))
}

/// Racah presentation: a single balanced `4F3`.
pub fn pmf_racah(p: &Params, x: u32) -> Result<Rational> {
    let p = p.reduced();
    if x > p.support_max() {
        return Ok(Rational::zero());
    }
    let xi = x as i64;
    let lead = Rational::from_integer(binom(p.ni() - p.k as i64, p.big_m() as i64));
    Ok(lead * row_factor(p.ni(), p.m as i64, xi) * racah_series(&p, xi, 0)?)
}

/// Which closed form [`pmf_special`] would use, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// `M N = 0`: the pmf does not depend on `k, l`.
    MnZero,
    /// `k = l`
    KEqualsL,
    /// `l = 0`
    LZero,
}

pub fn special_case(p: &Params) -> Option<SpecialCase> {
    let p = p.reduced();
    if p.big_m() == 0 || p.big_n() == 0 {
        Some(SpecialCase::MnZero)
    } else if p.k == p.l {
        Some(SpecialCase::KEqualsL)
    } else if p.l == 0 {
        Some(SpecialCase::LZero)
    } else {
        None
    }
}

/// Product closed forms for `M N = 0`, `k = l` and `l = 0`.
pub fn pmf_special(p: &Params, x: u32) -> Result<Rational> {
    let case = special_case(p).ok_or(Error::NotSpecialCase)?;
    let p = p.reduced();
    let (n, m, k, l, xi) = (p.ni(), p.m as i64, p.k as i64, p.l as i64, x as i64);
    let base = || row_factor(n, m, xi);
    let v = match case {
        SpecialCase::MnZero if x <= p.m => base(),
        SpecialCase::KEqualsL if x <= p.l.min(p.m) => {
            base() * Rational::new(binom(l, xi) * binom(n - l - xi, m - l), binom(m, xi))
        }
        SpecialCase::LZero if x <= p.k.min(p.m) => {
            base() * Rational::new(binom(k, xi) * binom(n - k - xi, n - m - k), binom(n - m, xi))
        }
        _ => Rational::zero(),
    };
    Ok(v)
}

/// `P[X <= x]` as a single `4F3` (one shift off the Racah series).
pub fn cdf(p: &Params, x: u32) -> Result<Rational> {
    let p = p.reduced();
    if x >= p.support_max() {
        return Ok(Rational::one());
    }
    let xi = x as i64;
    let lead = Rational::from_integer(binom(p.ni() - p.k as i64, p.big_m() as i64));
    let ratio = Rational::new(binom(p.ni(), xi), binom(p.ni(), p.m as i64));
    Ok(lead * ratio * racah_series(&p, xi, 1)?)
}

pub fn support_max(p: &Params) -> u32 {
    p.support_max()
}

/// Orientation of the weight fractions in the three-term recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceForm {
    /// Weights `(n-x)/(n-2x-1)`, `(n-x+1)/(n-2x+1)`, `(n-x+2)/(n-2x+3)`;
    /// the form that follows from the Racah-polynomial recurrence.
    Corrected,
    /// The reciprocal weights `(n-2x-1)/(n-x)`, ... as printed in the source
    /// lemma. Kept for regression tests; does not vanish on true pmf values.
    Printed,
}

/// Coefficients `a_x`, `c_x` of the recurrence (reduced params).
pub fn recurrence_coefficients(p: &Params, x: u32) -> (Rational, Rational) {
    let p = p.reduced();
    let (n, m, k, x) = (p.ni(), p.m as i64, p.k as i64, x as i64);
    // a_x has the removable singularity n - 2x = 0 only at x = m = n/2, where it vanishes.
    let a = if x == m {
        Rational::zero()
    } else {
        Rational::new(
            BigInt::from((m - x) * (n - m - x)) * ((n - k - x) * (n - x + 1)),
            BigInt::from((n - 2 * x) * (n - 2 * x + 1)),
        )
    };
    let c = Rational::new(
        BigInt::from(x * (x - k - 1)) * ((m - x + 1) * (n - m - x + 1)),
        BigInt::from((n - 2 * x + 1) * (n - 2 * x + 2)),
    );
    (a, c)
}

fn weight(form: RecurrenceForm, num: i64, den: i64) -> Result<Rational> {
    let (num, den) = match form {
        RecurrenceForm::Corrected => (num, den),
        RecurrenceForm::Printed => (den, num),
    };
    if den == 0 {
        return Err(Error::DegenerateDenominator(0));
    }
    Ok(exact::frac(num, den))
}

/// Residual of the three-term recurrence for candidate values
/// `p(x-1), p(x), p(x+1)`; zero on the true pmf for the corrected form.
/// The `x-1` term is dropped at `x = 0` and the `x+1` term at `x = m`.
pub fn recurrence_residual(
    p: &Params,
    x: u32,
    p_minus: &Rational,
    p_zero: &Rational,
    p_plus: &Rational,
) -> Result<Rational> {
    recurrence_residual_with(RecurrenceForm::Corrected, p, x, p_minus, p_zero, p_plus)
}

pub fn recurrence_residual_with(
    form: RecurrenceForm,
    p: &Params,
    x: u32,
    p_minus: &Rational,
    p_zero: &Rational,
    p_plus: &Rational,
) -> Result<Rational> {
    let r = p.reduced();
    if x > r.m {
        return Err(Error::DegenerateDenominator(x));
    }
    let (n, xi) = (r.ni(), x as i64);
    let mn = int(r.big_m() as i64 * r.big_n() as i64);
    let (a, c) = recurrence_coefficients(&r, x);
    let inv_binom = |j: i64| Rational::new(BigInt::one(), binom(n, j));

    let middle = (&a + &c - mn)
        * weight(form, n - xi + 1, n - 2 * xi + 1)?
        * inv_binom(xi)
        * p_zero;
    let mut total = -middle;
    if x < r.m {
        let w = weight(form, n - xi, n - 2 * xi - 1).map_err(|_| Error::DegenerateDenominator(x))?;
        total += a * w * inv_binom(xi + 1) * p_plus;
    }
    if x > 0 {
        total += c * weight(form, n - xi + 2, n - 2 * xi + 3)? * inv_binom(xi - 1) * p_minus;
    }
    Ok(total)
}

/// Printed and corrected forms of `eta` in the expectation/variance relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaForm {
    /// `(m(n-m) - MN) / n^2`, equal to `alpha gamma + alpha delta + beta gamma`.
    Corrected,
    /// `(n(n-m) - MN) / n^2`
    Printed,
}

pub fn casimir_eta(p: &Params, form: EtaForm) -> Result<Rational> {
    if p.n == 0 {
        return Err(Error::EmptySystem);
    }
    let (n, m) = (p.ni(), p.m as i64);
    let mn = p.big_m() as i64 * p.big_n() as i64;
    let lead = match form {
        EtaForm::Corrected => m * (n - m),
        EtaForm::Printed => n * (n - m),
    };
    Ok(exact::frac(lead - mn, n * n))
}

/// `(eta, V/n^2 - [E/n (1 - E/n) + E/n^2 - eta])` from the exact table.
pub fn casimir_check(p: &Params) -> Result<(Rational, Rational)> {
    casimir_check_with(p, EtaForm::Corrected)
}

pub fn casimir_check_with(p: &Params, form: EtaForm) -> Result<(Rational, Rational)> {
    let eta = casimir_eta(p, form)?;
    let table = build_table(p)?;
    let n = int(p.ni());
    let e = table.mean() / &n;
    let v = table.variance() / (&n * &n);
    let rhs = &e * (Rational::one() - &e) + &e / &n - &eta;
    Ok((eta, v - rhs))
}

/// `sum_x x^order p(x)`.
pub fn moments(p: &Params, order: u32) -> Result<Rational> {
    Ok(build_table(p)?.moment(order))
}

/// Closed-form `E[X]` for `n = 2m`.
pub fn expectation_half(m: u32, k: u32, l: u32) -> Result<Rational> {
    let p = Params::new(2 * m as i64, m as i64, k as i64, l as i64)?;
    let (big_m, big_n, mi) = (p.big_m() as i64, p.big_n() as i64, m as i64);
    let mut sum = Rational::zero();
    for r in 0..=big_m.min(big_n) {
        let num = (BigInt::one() << (2 * (mi - r)) as usize) * binom(big_n, r) * binom(big_m + big_n - r, big_n);
        let term = Rational::new(num, binom(2 * (mi - r), mi - r));
        if r % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(int(mi) + exact::frac(1, 2) - sum / int(2))
}

/// The full exact pmf for one parameter point, indexed `x = 0..=n/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistTable {
    params: Params,
    probabilities: Vec<Rational>,
}

impl DistTable {
    /// Wrap precomputed values after checking the table invariants.
    pub fn from_values(params: Params, probabilities: Vec<Rational>) -> Result<Self> {
        let t = DistTable { params, probabilities };
        t.check_invariants()?;
        Ok(t)
    }

    fn check_invariants(&self) -> Result<()> {
        let p = &self.params;
        if self.probabilities.len() != p.max_row() as usize + 1 {
            return Err(Error::InvariantViolation(format!("table length for {p}")));
        }
        if let Some(x) = self.probabilities.iter().position(|v| v.is_negative()) {
            return Err(Error::InvariantViolation(format!("p({x}) < 0 for {p}")));
        }
        let s = p.support_max() as usize;
        if let Some(x) = self.probabilities.iter().skip(s + 1).position(|v| !v.is_zero()) {
            return Err(Error::InvariantViolation(format!("p({}) != 0 above support for {p}", x + s + 1)));
        }
        let total = exact::sum_rationals(&self.probabilities);
        if !total.is_one() {
            return Err(Error::InvariantViolation(format!("sum = {total} for {p}")));
        }
        Ok(())
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn pmf(&self, x: u32) -> Rational {
        self.probabilities.get(x as usize).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn prefix_sums(&self) -> Vec<Rational> {
        exact::prefix_sums(&self.probabilities)
    }

    pub fn moment(&self, order: u32) -> Rational {
        let terms: Vec<Rational> = self
            .probabilities
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(x, v)| v * int(num_traits::pow(x as i64, order as usize)))
            .collect();
        exact::sum_rationals(&terms)
    }

    pub fn mean(&self) -> Rational {
        self.moment(1)
    }

    pub fn variance(&self) -> Rational {
        let e = self.mean();
        self.moment(2) - &e * &e
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probabilities.iter().map(exact::to_f64).collect()
    }
}

/// Exact table via the Racah presentation (closed forms when they apply).
pub fn build_table(p: &Params) -> Result<DistTable> {
    build_table_with(p, Exec::default())
}

pub fn build_table_with(p: &Params, exec: Exec) -> Result<DistTable> {
    if let Some(case) = special_case(p) {
        return DistTable::from_values(*p, special_table(p, case));
    }
    let xs: Vec<u32> = (0..=p.max_row()).collect();
    let values = exec.map(xs, |x| pmf_racah(p, x));
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    DistTable::from_values(*p, values)
}

/// `C(top, bottom)` moved by unit steps with exact integer division.
struct RunningBinom {
    top: i64,
    bottom: i64,
    value: BigInt,
}

impl RunningBinom {
    fn new(top: i64, bottom: i64) -> Self {
        RunningBinom { top, bottom, value: binom(top, bottom) }
    }

    fn inc_bottom(&mut self) {
        self.value = &self.value * (self.top - self.bottom) / (self.bottom + 1);
        self.bottom += 1;
    }

    fn dec_top(&mut self) {
        self.top -= 1;
        self.value = if self.top < 0 {
            binom(self.top, self.bottom)
        } else {
            &self.value * (self.top + 1 - self.bottom) / (self.top + 1)
        };
    }
}

/// All rows of [`pmf_special`] in one pass; every binomial is updated
/// incrementally, so large `n` costs `O(n)` big-integer steps.
fn special_table(p: &Params, case: SpecialCase) -> Vec<Rational> {
    let r = p.reduced();
    let (n, m, k, l) = (r.ni(), r.m as i64, r.k as i64, r.l as i64);
    let (limit, mut factors) = match case {
        SpecialCase::MnZero => (m, None),
        SpecialCase::KEqualsL => (
            l.min(m),
            Some((RunningBinom::new(l, 0), RunningBinom::new(n - l, m - l), RunningBinom::new(m, 0))),
        ),
        SpecialCase::LZero => (
            k.min(m),
            Some((RunningBinom::new(k, 0), RunningBinom::new(n - k, n - m - k), RunningBinom::new(n - m, 0))),
        ),
    };
    let binom_nm = binom(n, m);
    let mut binom_nx = RunningBinom::new(n, 0);
    (0..=r.max_row() as i64)
        .map(|x| {
            if x > limit {
                return Rational::zero();
            }
            let mut num = &binom_nx.value * (n - 2 * x + 1);
            let mut den = &binom_nm * (n - x + 1);
            if let Some((a, b, c)) = factors.as_mut() {
                num *= &a.value * &b.value;
                den *= &c.value;
                a.inc_bottom();
                b.dec_top();
                c.inc_bottom();
            }
            binom_nx.inc_bottom();
            Rational::new(num, den)
        })
        .collect()
}

/// Exact table by running the corrected recurrence upward from
/// `p(0) = binom(n-k, M) / binom(n, m)`. Sequential, but each step costs a
/// handful of big-rational operations instead of a full series, which is
/// what makes `n` in the thousands practical.
pub fn build_table_recurrence(p: &Params) -> Result<DistTable> {
    let r = p.reduced();
    let n = r.ni();
    let s = r.support_max();
    let mut values = vec![Rational::zero(); r.max_row() as usize + 1];
    values[0] = Rational::new(binom(n - r.k as i64, r.big_m() as i64), binom(n, r.m as i64));
    let mn = int(r.big_m() as i64 * r.big_n() as i64);
    for x in 0..s {
        let xi = x as i64;
        let (a, c) = recurrence_coefficients(&r, x);
        if a.is_zero() {
            values[x as usize + 1] = pmf_racah(&r, x + 1)?;
            continue;
        }
        let mut rhs = (&a + &c - &mn)
            * exact::frac(n - xi + 1, n - 2 * xi + 1)
            * Rational::new(BigInt::one(), binom(n, xi))
            * &values[x as usize];
        if x > 0 {
            rhs -= c
                * exact::frac(n - xi + 2, n - 2 * xi + 3)
                * Rational::new(BigInt::one(), binom(n, xi - 1))
                * &values[x as usize - 1];
        }
        let lead = a * exact::frac(n - xi, n - 2 * xi - 1) * Rational::new(BigInt::one(), binom(n, xi + 1));
        values[x as usize + 1] = rhs / lead;
    }
    DistTable::from_values(*p, values)
}
