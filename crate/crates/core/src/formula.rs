//! Closed-form counts for rank-refined 102-avoiding inversion sequences.
//!
//! Everything here is exact big-integer arithmetic. Prefactors such as
//! `(t+1)/j` are applied to the full product and the division is checked
//! to leave no remainder.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::Pattern;

/// Binomial coefficient with `binom(a, b) = 0` whenever `b < 0`, `b > a`
/// or `a < 0`.
pub fn binom(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Fibonacci numbers with `F_0 = 0`, `F_1 = 1`.
pub fn fib(k: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

pub fn pow2(e: i64) -> BigInt {
    assert!(e >= 0, "negative power of two: {e}");
    BigInt::one() << (e as usize)
}

/// `num / den`, panicking if the division is not exact.
pub fn exact_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division {num} / {den}");
    q
}

/// Ballot number `c(j, k) = k/(2j+k) * C(2j+k, j) = [x^j] C(x)^k`.
pub fn ballot(j: i64, k: i64) -> BigInt {
    if j < 0 || k < 0 {
        return BigInt::zero();
    }
    if k == 0 {
        return if j == 0 { BigInt::one() } else { BigInt::zero() };
    }
    exact_div(&(binom(2 * j + k, j) * k), &BigInt::from(2 * j + k))
}

pub fn catalan(n: i64) -> BigInt {
    ballot(n, 1)
}

/// The second patterns with a rank-refined formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tau {
    #[serde(rename = "101")]
    T101,
    #[serde(rename = "001")]
    T001,
    #[serde(rename = "011")]
    T011,
    #[serde(rename = "012")]
    T012,
    #[serde(rename = "021")]
    T021,
    #[serde(rename = "120")]
    T120,
    #[serde(rename = "201")]
    T201,
    #[serde(rename = "210")]
    T210,
    #[serde(rename = "110")]
    T110,
}

impl Tau {
    pub const ALL: [Tau; 9] = [
        Tau::T101,
        Tau::T001,
        Tau::T011,
        Tau::T012,
        Tau::T021,
        Tau::T120,
        Tau::T201,
        Tau::T210,
        Tau::T110,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tau::T101 => "101",
            Tau::T001 => "001",
            Tau::T011 => "011",
            Tau::T012 => "012",
            Tau::T021 => "021",
            Tau::T120 => "120",
            Tau::T201 => "201",
            Tau::T210 => "210",
            Tau::T110 => "110",
        }
    }

    pub fn pattern(self) -> Pattern {
        Pattern::parse(self.as_str()).expect("reduced")
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tau {
    type Err = Error;
    fn from_str(s: &str) -> Result<Tau> {
        Tau::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unsupported second pattern {s:?}")))
    }
}

/// A counting request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountQuery {
    pub n: usize,
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<Tau>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contains_101: Option<bool>,
}

/// An exact nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BigCount(pub BigUint);

impl BigCount {
    fn from_signed(v: BigInt) -> BigCount {
        BigCount(v.to_biguint().unwrap_or_else(|| panic!("negative count {v}")))
    }
}

impl From<usize> for BigCount {
    fn from(v: usize) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl CountQuery {
    /// Dispatches to the matching closed form.
    pub fn evaluate(&self) -> Result<BigCount> {
        match (self.tau, self.m) {
            (None, None) => count_102_rank(self.n, self.t),
            (Some(tau), None) => count_pair_rank(tau, self.n, self.t),
            (Some(Tau::T201), Some(m)) => count_201_by_max(self.n, self.t, m, self.contains_101.unwrap_or(false)),
            _ => Err(Error::DomainError("a max-value filter is only defined for tau = 201".into())),
        }
    }
}

/// `|IS_{n,t}(102)|`.
pub fn count_102_rank(n: usize, t: usize) -> Result<BigCount> {
    if n < 1 || t > n - 1 {
        return Err(Error::DomainError(format!("need n >= 1 and 0 <= t <= n-1, got n={n}, t={t}")));
    }
    let (n, t) = (n as i64, t as i64);
    let mut total = BigInt::zero();
    for j in t + 1..=n {
        let num = binom(3 * j - t - 2, j - t - 1) * (t + 1);
        let term = exact_div(&num, &BigInt::from(j)) * binom(j, n - j);
        if (n - j) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(BigCount::from_signed(total))
}

fn pair_range(n: usize, t: usize) -> Result<(i64, i64)> {
    if n < 2 || t > n - 2 {
        return Err(Error::DomainError(format!("need n >= 2 and 0 <= t <= n-2, got n={n}, t={t}")));
    }
    Ok((n as i64, t as i64))
}

/// `|IS_{n,t}(102, tau)|` for `n >= 2`, `0 <= t <= n-2`.
pub fn count_pair_rank(tau: Tau, n: usize, t: usize) -> Result<BigCount> {
    let (n, t) = pair_range(n, t)?;
    let v = match tau {
        Tau::T101 => {
            let sum: BigInt = (1..=n - t - 1).map(|i| binom(n, i) * binom(n - t + i - 2, 2 * i - 1)).sum();
            exact_div(&(sum * (t + 1)), &BigInt::from(n))
        }
        Tau::T001 => pow2(n - t - 2),
        Tau::T011 => fib((2 * n - 2 * t - 2) as u64),
        Tau::T012 => fib((2 * n - 2 * t - 3) as u64) * (t + 1),
        Tau::T021 => {
            let dyck: BigInt = (1..=n - t - 1)
                .map(|m| exact_div(&(binom(2 * m + t, m) * (t + 1)), &BigInt::from(m + t + 1)))
                .sum();
            (pow2(n - t - 2) - (n - t - 1)) * (t + 1) + dyck
        }
        Tau::T120 => binom(2 * n - t - 2, n - t - 1) - binom(2 * n - 2 * t - 3, n - t - 1),
        Tau::T201 => {
            let a: BigInt = (1..=n - t - 1).map(|m| term_201_avoiding(n, t, m)).sum();
            let b: BigInt = (1..=n - t - 3).map(|m| term_201_containing(n, t, m)).sum();
            a + b
        }
        Tau::T210 => formula_210(n, t, ballot),
        Tau::T110 => formula_110(n, t),
    };
    Ok(BigCount::from_signed(v))
}

/// The (102,210) formula with a pluggable `c(j, k)`; `c` only ever sees
/// the arguments `(n-t-1, t+1)`, `(i, t+6)` and `(i, 5)`.
pub fn formula_210<T>(n: i64, t: i64, c: impl Fn(i64, i64) -> T) -> T
where
    T: From<BigInt> + std::ops::AddAssign + std::ops::Sub<Output = T>,
{
    let mut v = c(n - t - 1, t + 1);
    for i in 0..=n - t - 3 {
        v += T::from(binom(2 * i + t + 3, i) * (t + 1));
    }
    for i in 0..=n - t - 4 {
        v += c(i, t + 6) - c(i, 5);
    }
    v
}

pub fn formula_110(n: i64, t: i64) -> BigInt {
    let mut v = binom(2 * n - t - 2, n - t - 1);
    for i in 2..=n - t {
        v -= binom(2 * n - t - 2 * i, n - t - i);
    }
    v
}

/// The (102,210) and (102,110) formulas on the wider range `0 <= t <= n-1`.
///
/// [`count_pair_rank`] stays on `t <= n-2`; this exists so the top row can
/// be compared with enumeration.
pub fn count_pair_rank_top_row(tau: Tau, n: usize) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::DomainError("need n >= 2".into()));
    }
    let (n, t) = (n as i64, n as i64 - 1);
    match tau {
        Tau::T210 => Ok(formula_210(n, t, ballot)),
        Tau::T110 => Ok(formula_110(n, t)),
        _ => Err(Error::DomainError(format!("no top-row formula for {tau}"))),
    }
}

fn term_201_avoiding(n: i64, t: i64, m: i64) -> BigInt {
    exact_div(&(binom(2 * m + t, m) * (t + 1)), &BigInt::from(m + t + 1)) * binom(n - t - 2, m - 1)
}

fn term_201_containing(n: i64, t: i64, m: i64) -> BigInt {
    let mut v = (pow2(n - m - t - 2) - 1) * (t + 1);
    for j in 1..=m - 1 {
        for s in 0..=t {
            let dyck = exact_div(&(binom(m + j + s, j) * (m + s - j + 1)), &BigInt::from(m + s + 1));
            for k in 0..=n - m - t - 3 {
                v += (pow2(k + 1) - 1) * &dyck * binom(n + j - m - t - k - 4, j - 1);
            }
        }
    }
    v
}

/// Number of `e` in `IS_{n,t}(102,201)` with `max(e) = m`, split by whether
/// `e` contains 101.
pub fn count_201_by_max(n: usize, t: usize, m: usize, contains_101: bool) -> Result<BigCount> {
    let (n, t) = pair_range(n, t)?;
    let m = m as i64;
    let upper = if contains_101 { n - t - 3 } else { n - t - 1 };
    if contains_101 && n < 4 {
        return Err(Error::DomainError("the 101-containing split needs n >= 4".into()));
    }
    if m < 1 || m > upper {
        return Err(Error::DomainError(format!("need 1 <= m <= {upper}, got m={m}")));
    }
    let v = if contains_101 { term_201_containing(n, t, m) } else { term_201_avoiding(n, t, m) };
    Ok(BigCount::from_signed(v))
}

/// `|A_{n,t}| = C(2n-t-3, n-1)`, where `A_{n,t}` holds the `e` in
/// `IS_{n,t}(102,120)` with `e_{max(e)+t} < max(e)`.
pub fn count_a_subset(n: usize, t: usize) -> Result<BigCount> {
    let (n, t) = pair_range(n, t)?;
    Ok(BigCount::from_signed(binom(2 * n - t - 3, n - 1)))
}

/// Number of sequences of rank `n-1` (only the zero sequence can have it)
/// that avoid 102 and `tau`.
pub fn count_top_rank(tau: Tau, n: usize) -> usize {
    let zeros = vec![0; n];
    usize::from(!crate::sequence::contains_pattern(&zeros, &tau.pattern()))
}

/// `1 + sum_{i=1}^{n-1} C(2i, i-1)`.
pub fn total_102_120(n: usize) -> BigInt {
    let n = n as i64;
    BigInt::one() + (1..n).map(|i| binom(2 * i, i - 1)).sum::<BigInt>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> BigCount {
        BigCount(BigUint::from(v))
    }

    #[test]
    fn primitives() {
        assert_eq!(binom(4, 2), 6.into());
        assert_eq!(binom(4, 5), 0.into());
        assert_eq!(binom(-1, 0), 0.into());
        assert_eq!(binom(3, -1), 0.into());
        assert_eq!(fib(5), 5.into());
        assert_eq!(fib(0), 0.into());
        assert_eq!(ballot(2, 1), 2.into());
        assert_eq!(ballot(0, 0), 1.into());
        assert_eq!((0..6).map(catalan).collect::<Vec<_>>(), [1, 1, 2, 5, 14, 42].map(BigInt::from));
    }

    #[test]
    fn rank_counts_small() {
        assert_eq!(count_102_rank(2, 0).unwrap(), c(1));
        assert_eq!(count_102_rank(3, 0).unwrap(), c(3));
        for n in 1..=9 {
            assert_eq!(count_102_rank(n, n - 1).unwrap(), c(1));
        }
        assert!(count_102_rank(3, 3).is_err());
        assert!(count_102_rank(0, 0).is_err());
    }

    #[test]
    fn pair_examples() {
        assert_eq!(count_pair_rank(Tau::T001, 4, 0).unwrap(), c(4));
        assert_eq!(count_pair_rank(Tau::T011, 3, 0).unwrap(), c(3));
        assert_eq!(count_pair_rank(Tau::T012, 3, 0).unwrap(), c(2));
        assert_eq!(count_pair_rank(Tau::T120, 3, 0).unwrap(), c(3));
        assert_eq!(count_pair_rank(Tau::T110, 3, 0).unwrap(), c(3));
        assert_eq!(count_pair_rank(Tau::T210, 3, 0).unwrap(), c(3));
        assert!(count_pair_rank(Tau::T110, 3, 2).is_err());
        assert!(count_pair_rank(Tau::T110, 1, 0).is_err());
    }

    #[test]
    fn split_201() {
        assert_eq!(count_201_by_max(4, 0, 1, false).unwrap(), c(1));
        // (0,1,0,1) is the only such sequence
        assert_eq!(count_201_by_max(4, 0, 1, true).unwrap(), c(1));
        assert!(count_201_by_max(4, 0, 2, true).is_err());
        assert!(count_201_by_max(4, 0, 0, false).is_err());
    }

    #[test]
    fn a_subset_base_case() {
        assert_eq!(count_a_subset(2, 0).unwrap(), c(1));
    }

    #[test]
    fn query_dispatch() {
        let q = CountQuery { n: 3, t: 0, tau: Some(Tau::T011), m: None, contains_101: None };
        assert_eq!(q.evaluate().unwrap(), c(3));
        let q = CountQuery { n: 3, t: 0, tau: None, m: Some(1), contains_101: None };
        assert!(q.evaluate().is_err());
        assert_eq!("210".parse::<Tau>().unwrap(), Tau::T210);
        assert!("000".parse::<Tau>().is_err());
    }

    #[test]
    fn top_row() {
        for tau in Tau::ALL {
            assert_eq!(count_top_rank(tau, 5), 1);
        }
    }
}
