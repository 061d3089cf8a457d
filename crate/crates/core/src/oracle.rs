//! Brute-force reference values computed by summing over all of `S_n`.
//!
//! Nothing here touches a hypergeometric series. The pmf is the expectation
//! of the isotypic projector `(dim/n!) sum_g chi(g) pi(g)`, characters of
//! two-row irreps come from counting `g`-invariant subsets, and
//! `<Xi| pi(g) |Xi>` counts basis kets of `Xi` mapped back into its support.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dist::{two_row_dim, DistTable, Params};
use crate::error::{Error, Result};
use crate::exact::{binom, factorial, int, Rational};
use crate::exec::Exec;

/// Largest `n` the group sum accepts (9! = 362880 elements).
pub const MAX_N: u32 = 9;

/// A conjugacy class of `S_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CycleType {
    /// Cycle lengths in non-increasing order.
    pub parts: Vec<u32>,
    pub class_size: BigInt,
}

impl CycleType {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let n: u32 = parts.iter().sum();
        let mut denom = BigInt::one();
        let mut i = 0;
        while i < parts.len() {
            let j = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
            denom *= BigInt::from(parts[i]).pow(j as u32) * factorial(j as u32);
            i += j;
        }
        CycleType { class_size: factorial(n) / denom, parts }
    }

    pub fn of_permutation(perm: &[usize]) -> Self {
        Self::new(cycle_lengths(perm))
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// All classes of `S_n`, one per partition of `n`.
    pub fn all(n: u32) -> Vec<CycleType> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if rest == 0 {
                out.push(cur.clone());
                return;
            }
            for part in (1..=rest.min(max)).rev() {
                cur.push(part);
                rec(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out.into_iter().map(CycleType::new).collect()
    }
}

fn cycle_lengths(perm: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Number of `j`-subsets fixed setwise by a permutation with these cycle
/// lengths, i.e. ways to assemble `j` from whole cycles.
pub fn fixed_subsets(parts: &[u32], j: u32) -> u64 {
    let j = j as usize;
    let mut ways = vec![0u64; j + 1];
    ways[0] = 1;
    for &c in parts {
        let c = c as usize;
        for s in (c..=j).rev() {
            ways[s] += ways[s - c];
        }
    }
    ways[j]
}

/// `chi^{(n-x,x)}` on a class: the permutation character on `x`-subsets
/// minus the one on `(x-1)`-subsets.
pub fn char_two_row(n: u32, x: u32, c: &CycleType) -> i64 {
    debug_assert_eq!(c.n(), n);
    let fix = |j: u32| fixed_subsets(&c.parts, j) as i64;
    if x == 0 {
        1
    } else {
        fix(x) - fix(x - 1)
    }
}

/// Number of support kets `W'` of `Xi` with `pi(g) |W'>` again in the support.
///
/// Positions `0..l` hold 1, `l..k` hold 0, and the remaining `n-k`
/// positions carry any weight-`M` pattern. `pi(g)` moves the bit at `i`
/// to `g(i)`, so position `j` of the image reads position `g^{-1}(j)`.
fn support_overlap(p: &Params, inv: &[usize]) -> u64 {
    let (k, l) = (p.k as usize, p.l as usize);
    let prefix = |j: usize| j < l;
    let (mut forced_one, mut forced_zero) = (0i64, 0i64);
    for (j, &src) in inv.iter().enumerate().take(k) {
        if src < k {
            if prefix(src) != prefix(j) {
                return 0;
            }
        } else if prefix(j) {
            forced_one += 1;
        } else {
            forced_zero += 1;
        }
    }
    let free = (p.n - p.k) as i64 - forced_one - forced_zero;
    let ones = p.big_m() as i64 - forced_one;
    if ones < 0 || ones > free {
        return 0;
    }
    u64::try_from(binom(free, ones)).expect("fits u64 for n <= 9")
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `sum_{g in class} #overlap(g)` for every class, sharded by `g^{-1}(0)`.
fn class_overlaps(p: &Params, exec: Exec) -> BTreeMap<Vec<u32>, u64> {
    let n = p.n as usize;
    let merge = |mut a: BTreeMap<Vec<u32>, u64>, b: BTreeMap<Vec<u32>, u64>| {
        for (key, v) in b {
            *a.entry(key).or_default() += v;
        }
        a
    };
    if n == 0 {
        return BTreeMap::from([(Vec::new(), 1)]);
    }
    let shard = |first: usize| {
        let mut acc = BTreeMap::new();
        let mut rest: Vec<usize> = (0..n).filter(|&i| i != first).collect();
        let mut inv = vec![0usize; n];
        loop {
            inv[0] = first;
            inv[1..].copy_from_slice(&rest);
            let count = support_overlap(p, &inv);
            if count > 0 {
                let mut key = cycle_lengths(&inv);
                key.sort_unstable_by(|a, b| b.cmp(a));
                *acc.entry(key).or_default() += count;
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        acc
    };
    exec.map_reduce((0..n).collect(), shard, BTreeMap::new, merge)
}

fn check_size(p: &Params) -> Result<()> {
    if p.n > MAX_N {
        Err(Error::TooLarge { n: p.n, limit: MAX_N })
    } else {
        Ok(())
    }
}

/// The whole pmf from one pass over `S_n`.
pub fn bruteforce_table(p: &Params) -> Result<DistTable> {
    bruteforce_table_with(p, Exec::default())
}

pub fn bruteforce_table_with(p: &Params, exec: Exec) -> Result<DistTable> {
    check_size(p)?;
    let overlaps = class_overlaps(p, exec);
    let norm = factorial(p.n) * binom((p.n - p.k) as i64, p.big_m() as i64);
    let values = (0..=p.n / 2)
        .map(|x| {
            let dim = two_row_dim(p.n, x)?.value;
            let sum: BigInt = overlaps
                .iter()
                .map(|(parts, &count)| {
                    let c = CycleType { parts: parts.clone(), class_size: BigInt::zero() };
                    BigInt::from(char_two_row(p.n, x, &c)) * count
                })
                .sum();
            Ok(Rational::new(dim * sum, norm.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    DistTable::from_values(*p, values)
}

/// `<Xi| P_(n-x,x) |Xi>` by direct group summation.
pub fn pmf_bruteforce(p: &Params, x: u32) -> Result<Rational> {
    check_size(p)?;
    Ok(bruteforce_table(p)?.pmf(x))
}

/// Eberlein polynomial `E_i(x) = sum_r (-1)^r C(x,r) C(m-x,i-r) C(n-m-x,i-r)`.
pub fn eberlein_direct(n: u32, m: u32, i: u32, x: u32) -> BigInt {
    let (n, m, i, x) = (n as i64, m as i64, i as i64, x as i64);
    (0..=i.min(x))
        .map(|r| {
            let t = binom(x, r) * binom(m - x, i - r) * binom(n - m - x, i - r);
            if r % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Casimir expectation `sum_x (n-2x)(n-2x+2) p(x)` and its closed form
/// `(n-2m)^2 + 2n + 4MN`.
pub fn casimir_bruteforce(p: &Params) -> Result<(Rational, Rational)> {
    Ok(casimir_of_table(&crate::dist::build_table(p)?))
}

pub fn casimir_of_table(table: &DistTable) -> (Rational, Rational) {
    let p = table.params();
    let n = p.n as i64;
    let spectral = table
        .probabilities()
        .iter()
        .enumerate()
        .map(|(x, v)| v * int((n - 2 * x as i64) * (n - 2 * x as i64 + 2)))
        .sum();
    let m = p.m as i64;
    let closed = int((n - 2 * m).pow(2) + 2 * n + 4 * p.big_m() as i64 * p.big_n() as i64);
    (spectral, closed)
}
