//! Exact integer/rational arithmetic and terminating hypergeometric sums.
//!
//! All series here are summed backwards in nested (Horner) form over a
//! common denominator: `1 + r0 (1 + r1 (1 + ... ))`, where `ri` is the
//! ratio of consecutive terms. Only one gcd reduction happens per series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Generalized binomial coefficient `a (a-1) ... (a-r+1) / r!`; zero for `r < 0`.
pub fn binom(a: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    if a < 0 {
        // binom(a, r) = (-1)^r binom(r - a - 1, r)
        let v = binom(r - a - 1, r);
        return if r % 2 == 0 { v } else { -v };
    }
    if r > a {
        return BigInt::zero();
    }
    let r = r.min(a - r);
    let mut acc = BigInt::one();
    for j in 0..r {
        acc *= a - j;
        acc /= j + 1;
    }
    acc
}

/// Rising factorial `(a)_r = a (a+1) ... (a+r-1)`.
pub fn rising(a: i64, r: u32) -> BigInt {
    (0..r as i64).fold(BigInt::one(), |acc, j| acc * (a + j))
}

/// Falling factorial `a (a-1) ... (a-r+1)`.
pub fn falling(a: i64, r: u32) -> BigInt {
    (0..r as i64).fold(BigInt::one(), |acc, j| acc * (a - j))
}

pub fn factorial(n: u32) -> BigInt {
    rising(1, n)
}

/// Sum `1 + r0 (1 + r1 (1 + ... r_{T-1}))` where each ratio is `num/den`.
fn nested_sum(ratios: Vec<(BigInt, BigInt)>) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (p, q) in ratios.into_iter().rev() {
        num = &q * &den + p * num;
        den *= q;
    }
    Rational::new(num, den)
}

/// Parameters of a terminating `rFs(a; b; z)` with integer `a`, `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypSpec {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
    pub argument: Rational,
}

impl HypSpec {
    pub fn new(numerator: Vec<i64>, denominator: Vec<i64>, argument: Rational) -> Self {
        HypSpec { numerator, denominator, argument }
    }

    /// Unit-argument series `rFs(a; b; 1)`.
    pub fn unit(numerator: &[i64], denominator: &[i64]) -> Self {
        Self::new(numerator.to_vec(), denominator.to_vec(), Rational::one())
    }

    /// Index of the last nonzero term.
    pub fn termination_index(&self) -> Option<usize> {
        termination_index(&self.numerator)
    }
}

fn termination_index(numerator: &[i64]) -> Option<usize> {
    numerator.iter().filter(|&&a| a <= 0).map(|&a| (-a) as usize).min()
}

fn check_poles(denominator: &[i64], last: usize) -> Result<()> {
    // The term at index i+1 carries the factor (b + i); it is a pole when
    // that factor vanishes before termination.
    match denominator
        .iter()
        .filter(|&&b| b <= 0 && ((-b) as usize) < last)
        .map(|&b| (-b) as usize + 1)
        .min()
    {
        Some(index) => Err(Error::DenominatorPole { index }),
        None => Ok(()),
    }
}

/// Exact value of a terminating generalized hypergeometric series.
pub fn hyp_terminating(spec: &HypSpec) -> Result<Rational> {
    let last = spec.termination_index().ok_or(Error::NonTerminating)?;
    check_poles(&spec.denominator, last)?;
    let zn = spec.argument.numer();
    let zd = spec.argument.denom();
    let ratios = (0..last as i64)
        .map(|i| {
            let p = spec.numerator.iter().fold(zn.clone(), |acc, &a| acc * (a + i));
            let q = spec.denominator.iter().fold(zd * (i + 1), |acc, &b| acc * (b + i));
            (p, q)
        })
        .collect();
    Ok(nested_sum(ratios))
}

fn check_q(q: &Rational) -> Result<()> {
    if q.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidQ(q.to_string()))
    }
}

/// `q^e` for any integer exponent (`q > 0`).
pub fn q_pow(q: &Rational, e: i64) -> Rational {
    q_pow_rational(q, e)
}

/// q-number `[e]_q = (1 - q^e) / (1 - q)`, extended to negative `e` by
/// `[-e]_q = -q^{-e} [e]_q`. Equals `e` at `q = 1`.
pub fn q_int(e: i64, q: &Rational) -> Result<Rational> {
    check_q(q)?;
    Ok(q_int_unchecked(e, q))
}

fn q_int_unchecked(e: i64, q: &Rational) -> Rational {
    if q.is_one() {
        return int(e);
    }
    if e >= 0 {
        let mut acc = Rational::zero();
        let mut pw = Rational::one();
        for _ in 0..e {
            acc += &pw;
            pw *= q;
        }
        acc
    } else {
        -(q_pow(q, e) * q_int_unchecked(-e, q))
    }
}

/// `(a; q)_n = (1 - a)(1 - a q) ... (1 - a q^{n-1})`.
pub fn q_pochhammer(a: &Rational, n: u32, q: &Rational) -> Result<Rational> {
    check_q(q)?;
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= Rational::one() - &term;
        term *= q;
    }
    Ok(acc)
}

/// Gaussian binomial via the `[n]!` product, so `q = 1` is the ordinary binomial.
pub fn q_binom(n: i64, m: i64, q: &Rational) -> Result<Rational> {
    check_q(q)?;
    Ok(q_binom_unchecked(n, m, q))
}

pub(crate) fn q_binom_unchecked(n: i64, m: i64, q: &Rational) -> Rational {
    if m < 0 || m > n {
        return Rational::zero();
    }
    if q.is_one() {
        return Rational::from_integer(binom(n, m));
    }
    let m = m.min(n - m);
    let mut acc = Rational::one();
    for j in 1..=m {
        acc *= q_int_unchecked(n - m + j, q) / q_int_unchecked(j, q);
    }
    acc
}

/// Terminating basic hypergeometric series whose parameters are integer
/// powers of `q`: `rφs(q^a; q^b; q, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QHypSpec {
    /// Exponents `a_i` of the numerator parameters `q^{a_i}`.
    pub numerator: Vec<i64>,
    /// Exponents `b_j` of the denominator parameters `q^{b_j}`.
    pub denominator: Vec<i64>,
    pub q: Rational,
    pub argument: Rational,
    /// Power applied to `(-1)^i q^{C(i,2)}`; `1 + s - r` in the standard definition.
    pub correction_power: i64,
}

impl QHypSpec {
    pub fn new(numerator: Vec<i64>, denominator: Vec<i64>, q: Rational, argument: Rational) -> Self {
        let correction_power = 1 + denominator.len() as i64 - numerator.len() as i64;
        QHypSpec { numerator, denominator, q, argument, correction_power }
    }
}

/// Exact value of a terminating `rφs`.
///
/// Each Pochhammer factor `1 - q^e` is written as `(1 - q)[e]_q`, which
/// makes the `q = 1` limit exact whenever `r = s + 1`.
pub fn q_hyp_terminating(spec: &QHypSpec) -> Result<Rational> {
    check_q(&spec.q)?;
    let q = &spec.q;
    let last = termination_index(&spec.numerator).ok_or(Error::NonTerminating)?;
    check_poles(&spec.denominator, last)?;
    let excess = spec.numerator.len() as i64 - spec.denominator.len() as i64 - 1;
    if q.is_one() && excess < 0 {
        return Err(Error::DenominatorPole { index: 1 });
    }
    // (1 - q) factors left over after rewriting every Pochhammer with [e]_q.
    let scale = q_pow_rational(&(Rational::one() - q), excess);
    let ratios = (0..last as i64)
        .map(|i| {
            let mut r = spec
                .numerator
                .iter()
                .fold(scale.clone() * &spec.argument, |acc, &a| acc * q_int_unchecked(a + i, q));
            for &b in &spec.denominator {
                r /= q_int_unchecked(b + i, q);
            }
            r /= q_int_unchecked(i + 1, q);
            // (-1)^i q^{C(i,2)} advances by the factor -q^i.
            let step = -q_pow(q, i);
            r *= q_pow_rational(&step, spec.correction_power);
            (r.numer().clone(), r.denom().clone())
        })
        .collect();
    Ok(nested_sum(ratios))
}

fn q_pow_rational(base: &Rational, e: i64) -> Rational {
    let b = if e < 0 { base.recip() } else { base.clone() };
    num_traits::pow(b, e.unsigned_abs() as usize)
}

/// Sum over a common denominator: one big reduction at the end instead of
/// one per addition.
pub fn sum_rationals<'a, I: IntoIterator<Item = &'a Rational>>(items: I) -> Rational {
    let items: Vec<&Rational> = items.into_iter().collect();
    let lcm = common_denominator(&items);
    let num: BigInt = items.iter().map(|r| r.numer() * (&lcm / r.denom())).sum();
    Rational::new(num, lcm)
}

/// Running sums `v_0, v_0 + v_1, ...`, each reduced.
pub fn prefix_sums(items: &[Rational]) -> Vec<Rational> {
    let refs: Vec<&Rational> = items.iter().collect();
    let lcm = common_denominator(&refs);
    let mut acc = BigInt::zero();
    items
        .iter()
        .map(|r| {
            acc += r.numer() * (&lcm / r.denom());
            Rational::new(acc.clone(), lcm.clone())
        })
        .collect()
}

fn common_denominator(items: &[&Rational]) -> BigInt {
    let mut lcm = BigInt::one();
    for r in items {
        if !(r.is_zero() || (&lcm % r.denom()).is_zero()) {
            lcm = lcm.lcm(r.denom());
        }
    }
    lcm
}

/// Natural log of a positive big integer, accurate far beyond f64 range.
pub fn ln_big(v: &BigInt) -> f64 {
    assert!(v.is_positive(), "ln of non-positive integer");
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(v: &Rational) -> f64 {
    ln_big(v.numer()) - ln_big(v.denom())
}

/// Nearest f64; values below the subnormal range flush to zero.
pub fn to_f64(v: &Rational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    if let Some(f) = v.to_f64() {
        if f.is_finite() && f != 0.0 {
            return f;
        }
    }
    let sign = if v.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&v.abs()).exp()
}

/// Exact rational equal to the binary value of `x` (finite `x` only).
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}
