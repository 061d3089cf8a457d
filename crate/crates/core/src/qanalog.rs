//! The q-deformed distribution `p(x|q)` attached to `(GL(n,F_q), P(m,n-m,F_q))`.
//!
//! Only `m <= n-m` is accepted: the deformed pmf is not known to share the
//! `m -> n-m` symmetry of the classical one, so nothing is mirrored.

use num_traits::{One, Zero};

use crate::dist::Params;
use crate::error::{Error, Result};
use crate::exact::{q_binom, q_hyp_terminating, q_int, q_pow, QHypSpec, Rational};
use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq)]
pub struct QContext {
    q: Rational,
    params: Params,
}

impl QContext {
    pub fn new(q: Rational, params: Params) -> Result<Self> {
        if q <= Rational::zero() {
            return Err(Error::InvalidQ(q.to_string()));
        }
        if params.m > params.n - params.m {
            return Err(Error::OutOfCone(format!(
                "m <= n - m (q-analogue is only defined there; got {params})"
            )));
        }
        Ok(QContext { q, params })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    fn n(&self) -> i64 {
        self.params.n as i64
    }

    fn m(&self) -> i64 {
        self.params.m as i64
    }

    fn check_row(&self, x: u32) -> Result<()> {
        if x > self.params.m {
            Err(Error::BadRow { n: self.params.n, x })
        } else {
            Ok(())
        }
    }

    fn qbinom(&self, a: i64, b: i64) -> Rational {
        q_binom(a, b, &self.q).expect("q checked positive")
    }

    fn qint(&self, e: i64) -> Rational {
        q_int(e, &self.q).expect("q checked positive")
    }

    /// `q^x [n, x]_q / [n, m]_q * [n-2x+1]_q / [n-x+1]_q`.
    fn row_factor(&self, x: i64) -> Rational {
        let (n, m) = (self.n(), self.m());
        q_pow(&self.q, x) * self.qbinom(n, x) / self.qbinom(n, m) * self.qint(n - 2 * x + 1)
            / self.qint(n - x + 1)
    }

    fn phi(&self, numerator: Vec<i64>, denominator: Vec<i64>) -> Result<Rational> {
        q_hyp_terminating(&QHypSpec::new(numerator, denominator, self.q.clone(), self.q.clone()))
    }
}

/// `3phi2(q^-i, q^-x, q^(x-n-1); q^-m, q^(m-n); q, q)`.
pub fn q_zonal(ctx: &QContext, x: u32, i: u32) -> Result<Rational> {
    ctx.check_row(x)?;
    ctx.check_row(i)?;
    let (n, m, x, i) = (ctx.n(), ctx.m(), x as i64, i as i64);
    ctx.phi(vec![-i, -x, x - n - 1], vec![-m, m - n])
}

/// The same zonal value from the q-Eberlein alternating sum.
pub fn q_zonal_alternating(ctx: &QContext, x: u32, i: u32) -> Result<Rational> {
    ctx.check_row(x)?;
    ctx.check_row(i)?;
    let (n, m, x, i) = (ctx.n(), ctx.m(), x as i64, i as i64);
    let q = ctx.q();
    let mut sum = Rational::zero();
    for r in 0..=i.min(x) {
        let e = r * (1 - x - 2 * i) + 3 * (r * (r - 1) / 2);
        let t = q_pow(q, e) * ctx.qbinom(x, r) * ctx.qbinom(m - x, i - r) * ctx.qbinom(n - m - x, i - r);
        if r % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    Ok(q_pow(q, x * i) * sum / (ctx.qbinom(m, i) * ctx.qbinom(n - m, i)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QRoute {
    Hahn,
    Racah,
}

pub fn q_pmf(ctx: &QContext, x: u32, route: QRoute) -> Result<Rational> {
    ctx.check_row(x)?;
    let p = ctx.params();
    let (big_m, big_n) = (p.big_m() as i64, p.big_n() as i64);
    let xi = x as i64;
    match route {
        QRoute::Hahn => {
            let mut sum = Rational::zero();
            for i in 0..=big_m.min(big_n) {
                let w = q_zonal(ctx, x, i as u32)?;
                sum += q_pow(ctx.q(), i * i) * ctx.qbinom(big_m, i) * ctx.qbinom(big_n, i) * w;
            }
            Ok(ctx.row_factor(xi) * sum)
        }
        QRoute::Racah => {
            let (n, m) = (ctx.n(), ctx.m());
            let series = ctx.phi(
                vec![-xi, xi - n - 1, -big_m, -big_n],
                vec![-m, m - n, -big_m - big_n],
            )?;
            Ok(ctx.qbinom(n - p.k as i64, big_m) * ctx.row_factor(xi) * series)
        }
    }
}

/// `s(x|q) = sum_{y <= x} p(y|q)` as a single `4phi3`.
pub fn q_cdf(ctx: &QContext, x: u32) -> Result<Rational> {
    ctx.check_row(x)?;
    let p = ctx.params();
    let (n, m, xi) = (ctx.n(), ctx.m(), x as i64);
    let (big_m, big_n) = (p.big_m() as i64, p.big_n() as i64);
    let series = ctx.phi(vec![-xi, xi - n, -big_m, -big_n], vec![-m, m - n, -big_m - big_n])?;
    Ok(ctx.qbinom(n - p.k as i64, big_m) * ctx.qbinom(n, xi) / ctx.qbinom(n, m) * series)
}

/// `p(x|q)` for `x = 0..=floor(n/2)`; rows past `m` are zero.
pub fn q_table(ctx: &QContext, route: QRoute) -> Result<Vec<Rational>> {
    q_table_with(ctx, route, Exec::default())
}

pub fn q_table_with(ctx: &QContext, route: QRoute, exec: Exec) -> Result<Vec<Rational>> {
    let p = ctx.params();
    exec.map((0..=p.n / 2).collect(), |x| {
        if x > p.m {
            Ok(Rational::zero())
        } else {
            q_pmf(ctx, x, route)
        }
    })
    .into_iter()
    .collect()
}

/// `s(m|q)`, which should be exactly one.
pub fn q_total(ctx: &QContext) -> Result<Rational> {
    q_cdf(ctx, ctx.params().m)
}

pub fn is_normalized(table: &[Rational]) -> bool {
    table.iter().sum::<Rational>() == Rational::one()
}
