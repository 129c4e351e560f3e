//! Exact truncated power series and the generating-function identities.
//!
//! Coefficients are rationals so that division never loses information;
//! every identity is compared coefficient by coefficient with no tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{binom, catalan, count_102_rank, count_pair_rank, exact_div, Tau};
use crate::fpath::{enumerate_lf, in_class_110, in_class_210, in_class_210a, in_class_210b, in_class_210b_tilde, LabeledFPath};
use crate::paths::enumerate_uvd;
use crate::sequence::{enumerate_is, pattern_102};

/// Largest x-order accepted by [`verify_identity`].
pub const MAX_ORDER: usize = 32;
/// Largest u-order accepted by [`verify_identity`].
pub const MAX_U_ORDER: usize = 8;

/// Oracle limits: semilengths for path enumeration, lengths for sequences.
const UVD_ORACLE: usize = 7;
const LF_ORACLE: usize = 6;
const IS_ORACLE: usize = 8;

fn q(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `c_0 + c_1 x + .. + c_N x^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates to order `order`.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_ints<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>, order: usize) -> Self {
        TruncatedSeries::new(coeffs.into_iter().map(q).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries::new(Vec::new(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        TruncatedSeries::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        TruncatedSeries::constant(BigRational::one(), order)
    }

    /// `x^k`.
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = TruncatedSeries::zero(order);
        if k <= order {
            s.coeffs[k] = BigRational::one();
        }
        s
    }

    pub fn x(order: usize) -> Self {
        TruncatedSeries::monomial(1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `[x^k]`, zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&q(c))
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if i + k <= n {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        TruncatedSeries { coeffs }
    }

    fn mul_series(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn inv(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonInvertibleConstantTerm);
        }
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = c0.recip();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -acc * &out[0];
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = TruncatedSeries::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(p(x))` for a series `p` with zero constant term.
    pub fn compose(&self, p: &Self) -> Result<Self> {
        if !p.coeffs[0].is_zero() {
            return Err(Error::BadComposition);
        }
        let n = self.order().min(p.order());
        let p = p.truncate(n);
        let mut acc = TruncatedSeries::zero(n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            acc = &(&acc * &p) + &TruncatedSeries::constant(c.clone(), n);
        }
        Ok(acc)
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// First power where the two series differ, up to the smaller order.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, BigRational, BigRational)> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k]).map(|k| (k, self.coeffs[k].clone(), other.coeffs[k].clone()))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, other: &TruncatedSeries) -> TruncatedSeries {
        self.mul_series(other)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// `(1-4x)^{1/2}`.
pub fn sqrt1m4x(order: usize) -> TruncatedSeries {
    let coeffs = (0..=order as i64)
        .map(|n| -BigRational::new(binom(2 * n, n), BigInt::from(2 * n - 1)))
        .collect();
    TruncatedSeries::new(coeffs, order)
}

/// `(1-4x)^{-1/2}`.
pub fn inv_sqrt1m4x(order: usize) -> TruncatedSeries {
    TruncatedSeries::new((0..=order as i64).map(|n| q(binom(2 * n, n))).collect(), order)
}

/// `1/(1-x)`.
pub fn geometric(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_ints(std::iter::repeat_n(1, order + 1), order)
}

/// `x - x^2`.
pub fn x_minus_x2(order: usize) -> TruncatedSeries {
    &TruncatedSeries::x(order) - &TruncatedSeries::monomial(2, order)
}

/// Iterates `s -> f(s)` from `init` until it stops changing (at most `order + 2` rounds).
pub fn fixed_point(init: TruncatedSeries, f: impl Fn(&TruncatedSeries) -> TruncatedSeries) -> TruncatedSeries {
    let mut s = init;
    for _ in 0..s.order() + 2 {
        let next = f(&s);
        if next == s {
            break;
        }
        s = next;
    }
    s
}

/// The Catalan series from `C = 1 + x C^2`.
pub fn catalan_series(order: usize) -> TruncatedSeries {
    let x = TruncatedSeries::x(order);
    let one = TruncatedSeries::one(order);
    fixed_point(one.clone(), |c| &one + &(&x * &c.pow(2)))
}

/// A polynomial in `u` whose coefficients are series in `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    terms: Vec<TruncatedSeries>,
}

impl BivariateSeries {
    pub fn new(terms: Vec<TruncatedSeries>) -> Self {
        assert!(!terms.is_empty(), "need at least the u^0 term");
        BivariateSeries { terms }
    }

    /// `sum_t f(t) u^t` for `t <= u_order`.
    pub fn from_fn(u_order: usize, f: impl Fn(usize) -> TruncatedSeries) -> Self {
        BivariateSeries::new((0..=u_order).map(f).collect())
    }

    pub fn u_order(&self) -> usize {
        self.terms.len() - 1
    }

    /// `[u^t]`.
    pub fn u_coeff(&self, t: usize) -> &TruncatedSeries {
        &self.terms[t]
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.u_order().min(other.u_order());
        BivariateSeries::from_fn(t, |i| &self.terms[i] + &other.terms[i])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = self.u_order().min(other.u_order());
        BivariateSeries::from_fn(t, |i| {
            (0..=i).fold(TruncatedSeries::zero(self.terms[0].order()), |acc, j| {
                &acc + &(&self.terms[j] * &other.terms[i - j])
            })
        })
    }

    /// `1/(1 - u f)`.
    pub fn geometric_in_u(f: &TruncatedSeries, u_order: usize) -> Self {
        BivariateSeries::from_fn(u_order, |t| f.pow(t as u32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    ACubic,
    DCubic,
    LagrangeE,
    DTPower,
    SumDExpansion,
    CatalanFix,
    CatalanSqrt,
    A0Closed,
    B0Closed,
    GCoeff,
    H0Closed,
    HCoeff,
}

impl IdentityId {
    pub const ALL: [IdentityId; 12] = [
        IdentityId::ACubic,
        IdentityId::DCubic,
        IdentityId::LagrangeE,
        IdentityId::DTPower,
        IdentityId::SumDExpansion,
        IdentityId::CatalanFix,
        IdentityId::CatalanSqrt,
        IdentityId::A0Closed,
        IdentityId::B0Closed,
        IdentityId::GCoeff,
        IdentityId::H0Closed,
        IdentityId::HCoeff,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::ACubic => "A_CUBIC",
            IdentityId::DCubic => "D_CUBIC",
            IdentityId::LagrangeE => "LAGRANGE_E",
            IdentityId::DTPower => "D_T_POWER",
            IdentityId::SumDExpansion => "SUM_D_EXPANSION",
            IdentityId::CatalanFix => "CATALAN_FIX",
            IdentityId::CatalanSqrt => "CATALAN_SQRT",
            IdentityId::A0Closed => "A0_CLOSED",
            IdentityId::B0Closed => "B0_CLOSED",
            IdentityId::GCoeff => "G_COEFF",
            IdentityId::H0Closed => "H0_CLOSED",
            IdentityId::HCoeff => "H_COEFF",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

/// The first coefficient at which the two sides of a relation disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub relation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub power: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub order: usize,
    pub u_order: usize,
    pub holds: bool,
    /// Number of relations compared.
    pub relations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Default)]
struct Checker {
    relations: usize,
    mismatch: Option<Mismatch>,
}

impl Checker {
    fn series(&mut self, relation: &str, t: Option<usize>, lhs: &TruncatedSeries, rhs: &TruncatedSeries) {
        self.relations += 1;
        if self.mismatch.is_some() {
            return;
        }
        if let Some((power, l, r)) = lhs.first_difference(rhs) {
            self.mismatch = Some(Mismatch { relation: relation.into(), t, power, lhs: l.to_string(), rhs: r.to_string() });
        }
    }

    /// Compares `[x^power]` of a series with an externally computed value.
    fn value(&mut self, relation: &str, t: Option<usize>, power: usize, lhs: BigRational, rhs: impl Into<BigInt>) {
        self.relations += 1;
        if self.mismatch.is_some() {
            return;
        }
        let rhs = q(rhs);
        if lhs != rhs {
            self.mismatch = Some(Mismatch { relation: relation.into(), t, power, lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
    }
}

/// The building blocks shared by several identities, all at x-order `n`.
struct Kit {
    one: TruncatedSeries,
    x: TruncatedSeries,
    c: TruncatedSeries,
    xc: TruncatedSeries,
    geo: TruncatedSeries,
}

impl Kit {
    fn new(n: usize) -> Self {
        let c = catalan_series(n);
        let x = TruncatedSeries::x(n);
        let xc = &x * &c;
        Kit { one: TruncatedSeries::one(n), x, c, xc, geo: geometric(n) }
    }

    fn xc_pow(&self, t: usize) -> TruncatedSeries {
        self.xc.pow(t as u32)
    }
}

/// `A = 1 + (x - x^2) A^3` by iteration.
pub fn series_a(order: usize) -> TruncatedSeries {
    let one = TruncatedSeries::one(order);
    let y = x_minus_x2(order);
    fixed_point(one.clone(), |a| &one + &(&y * &a.pow(3)))
}

/// `D` from the last-step decomposition `D = x(1+D)^2 + x^2(1+D)^3 D / (1 - x(1+D)^2)`.
pub fn series_d(order: usize) -> TruncatedSeries {
    let one = TruncatedSeries::one(order);
    let x = TruncatedSeries::x(order);
    fixed_point(TruncatedSeries::zero(order), |d| {
        let p = &one + d;
        let xp2 = &x * &p.pow(2);
        let tail = (&(&x.pow(2) * &p.pow(3)) * d).div(&(&one - &xp2)).expect("unit denominator");
        &xp2 + &tail
    })
}

/// `D_0 = D / (1 + D)`.
pub fn series_d0(order: usize) -> TruncatedSeries {
    let d = series_d(order);
    d.div(&(&TruncatedSeries::one(order) + &d)).expect("unit denominator")
}

/// `E = y / (1 - E)^2` in the variable `y`.
pub fn series_e(order: usize) -> TruncatedSeries {
    let one = TruncatedSeries::one(order);
    let y = TruncatedSeries::x(order);
    fixed_point(TruncatedSeries::zero(order), |e| y.div(&(&one - e).pow(2)).expect("unit denominator"))
}

/// `A_0` from the last-step decomposition of paths with at most one
/// (pure or 0-tailed) down step.
pub fn series_a0_recursive(order: usize) -> TruncatedSeries {
    let k = Kit::new(order);
    let tail = &k.x * &k.geo;
    // the A_0-free part: sum_{t>=1} t (xC)^{t+1} (1 + x/(1-x))
    let mut free = TruncatedSeries::zero(order);
    for t in 1..=order {
        free = &free + &(&k.xc_pow(t + 1).scale_int(t as i64) * &(&k.one + &tail));
    }
    fixed_point(k.one.clone(), |a0| {
        let mut s = &k.one + &free;
        for t in 0..=order {
            s = &s + &(&k.x * &series_a_t(&k, a0, t));
        }
        s
    })
}

fn series_a_t(k: &Kit, a0: &TruncatedSeries, t: usize) -> TruncatedSeries {
    let lead = &a0.scale_int(t as i64 + 1) - &k.c.scale_int(t as i64);
    &lead * &k.xc_pow(t)
}

/// `C + x^2 C^3 / ((1-x) sqrt(1-4x))`.
pub fn series_a0_closed(order: usize) -> TruncatedSeries {
    let k = Kit::new(order);
    let tail = &(&(&k.x.pow(2) * &k.c.pow(3)) * &k.geo) * &inv_sqrt1m4x(order);
    &k.c + &tail
}

/// `B~_0` as the double sum over `s`, `k`, `a` with weight
/// `binom(s+k-a-1, k-1) - 1`.
pub fn series_b0_sum(order: usize) -> TruncatedSeries {
    let kit = Kit::new(order);
    let mut out = TruncatedSeries::zero(order);
    for s in 2..=order {
        let mut poly = vec![BigInt::zero(); order + 1];
        for k in 2..=order - s {
            if k + s > order {
                break;
            }
            for a in 1..s {
                poly[k] += binom((s + k - a - 1) as i64, k as i64 - 1) - 1;
            }
        }
        let poly = TruncatedSeries::from_ints(poly, order);
        let weight = &TruncatedSeries::monomial(s, order) * &kit.c.pow(s as u32 + 1);
        out = &out + &(&poly * &weight);
    }
    out
}

/// `x^4 C^7 / (1-x)`.
pub fn series_b0_closed(order: usize) -> TruncatedSeries {
    let k = Kit::new(order);
    &(&TruncatedSeries::monomial(4, order) * &k.c.pow(7)) * &k.geo
}

/// The closed form of `[u^t] G`.
pub fn series_g_t(order: usize, t: usize) -> TruncatedSeries {
    let k = Kit::new(order);
    let inv_root = inv_sqrt1m4x(order);
    let xt = |e: usize| TruncatedSeries::monomial(t + e, order);
    let first = (&(&(&xt(2) * &k.c.pow(t as u32 + 3)) * &k.geo) * &inv_root).scale_int(t as i64 + 1);
    let second = &TruncatedSeries::monomial(t, order) * &k.c.pow(t as u32 + 1);
    let third = &(&xt(3) * &k.c.pow(t as u32 + 6)) * &k.geo;
    let fourth = &(&xt(3) * &k.c.pow(5)) * &k.geo;
    &(&(&first + &second) + &third) - &fourth
}

/// `H_0` from the last-step decomposition of the 110 class.
pub fn series_h0_recursive(order: usize) -> TruncatedSeries {
    let k = Kit::new(order);
    let x2_geo = &k.x.pow(2) * &k.geo;
    let mut free = TruncatedSeries::zero(order);
    let mut weight = TruncatedSeries::zero(order);
    for t in 0..=order {
        let p = k.xc_pow(t);
        if t >= 1 {
            free = &free + &(&(&x2_geo * &p) * &k.c).scale_int(t as i64);
        }
        weight = &weight + &(&k.x * &p).scale_int(t as i64 + 1);
    }
    fixed_point(k.one.clone(), |h0| &(&k.one + &free) + &(&weight * h0))
}

/// `(1-2x) / ((1-x) sqrt(1-4x))`.
pub fn series_h0_closed(order: usize) -> TruncatedSeries {
    let k = Kit::new(order);
    let num = &k.one - &k.x.scale_int(2);
    &(&num * &k.geo) * &inv_sqrt1m4x(order)
}

/// Named series for the `series coeffs` CLI verb. `t` selects the rank for
/// the families `Dt`, `Gt` and `Ht`.
pub fn named_series(name: &str, order: usize, t: usize) -> Result<TruncatedSeries> {
    Ok(match name {
        "A" => series_a(order),
        "D" => series_d(order),
        "D0" => series_d0(order),
        "Dt" => series_d0(order).pow(t as u32 + 1),
        "E" => series_e(order),
        "C" => catalan_series(order),
        "A0" => series_a0_closed(order),
        "B0" => series_b0_closed(order),
        "Gt" => series_g_t(order, t),
        "Ht" => &series_h0_closed(order) * &Kit::new(order).xc_pow(t),
        _ => return Err(Error::Parse(format!("unknown series {name:?}"))),
    })
}

/// Table `[n][t]` of LF paths of semilength `n` and height `t` satisfying `pred`.
fn lf_table(n_max: usize, pred: impl Fn(&LabeledFPath) -> bool) -> Result<Vec<Vec<usize>>> {
    let mut table = Vec::new();
    for n in 0..=n_max {
        let mut row = vec![0usize; n + 1];
        for path in enumerate_lf(n)? {
            if pred(&path) {
                row[path.height() as usize] += 1;
            }
        }
        table.push(row);
    }
    Ok(table)
}

fn table_entry(table: &[Vec<usize>], n: usize, t: usize) -> usize {
    table.get(n).and_then(|row| row.get(t)).copied().unwrap_or(0)
}

/// Checks one identity at x-order `order` and u-order `u_order`.
pub fn verify_identity(id: IdentityId, order: usize, u_order: usize) -> Result<IdentityReport> {
    if order > MAX_ORDER || u_order > MAX_U_ORDER {
        return Err(Error::DomainError(format!(
            "order {order} / u-order {u_order} exceed the limits {MAX_ORDER} / {MAX_U_ORDER}"
        )));
    }
    if order < 2 {
        return Err(Error::DomainError("order must be at least 2".into()));
    }
    let mut ck = Checker::default();
    let k = Kit::new(order);
    let n = order;
    match id {
        IdentityId::ACubic => {
            let a = series_a(n);
            let rhs = &k.one + &(&x_minus_x2(n) * &a.pow(3));
            ck.series("A = 1 + (x - x^2) A^3", None, &a, &rhs);
            ck.series("A = 1 + D", None, &a, &(&k.one + &series_d(n)));
            for len in 1..=n {
                let total: BigInt = (0..len).map(|t| BigInt::from(count_102_rank(len, t).map(|c| c.0).unwrap())).sum();
                ck.value("[x^n] A = sum_t |IS_{n,t}(102)|", None, len, a.coeff(len), total);
            }
            for len in 1..=IS_ORACLE.min(n) {
                let count = enumerate_is(len, &[pattern_102()])?.len();
                ck.value("[x^n] A = |IS_n(102)|", None, len, a.coeff(len), count);
            }
        }
        IdentityId::DCubic => {
            let d = series_d(n);
            let p = &k.one + &d;
            ck.series("D = (x - x^2)(1 + D)^3", None, &d, &(&x_minus_x2(n) * &p.pow(3)));
            for len in 1..=UVD_ORACLE.min(n) {
                ck.value("[x^n] D = |UVD_n|", None, len, d.coeff(len), enumerate_uvd(len)?.len());
            }
        }
        IdentityId::LagrangeE => {
            let e = series_e(n);
            ck.series("E = y / (1 - E)^2", None, &e, &TruncatedSeries::x(n).div(&(&k.one - &e).pow(2))?);
            for t in 0..=u_order {
                let et = e.pow(t as u32 + 1);
                for m in 1..=n {
                    let (m, ti) = (m as i64, t as i64);
                    let want = exact_div(&(binom(3 * m - ti - 2, m - ti - 1) * (ti + 1)), &BigInt::from(m));
                    ck.value("[y^n] E^{t+1} = (t+1)/n binom(3n-t-2, n-t-1)", Some(t), m as usize, et.coeff(m as usize), want);
                }
            }
        }
        IdentityId::DTPower => {
            let d = series_d(n);
            let d0 = series_d0(n);
            let mut total = TruncatedSeries::zero(n);
            for t in 0..n {
                total = &total + &d0.pow(t as u32 + 1);
            }
            ck.series("sum_t D_0^{t+1} = D", None, &total, &d);
            ck.series("D = D_0 / (1 - D_0)", None, &d, &d0.div(&(&k.one - &d0))?);
            let mut table = vec![vec![0usize; UVD_ORACLE + 1]; UVD_ORACLE + 1];
            for len in 1..=UVD_ORACLE.min(n) {
                for s in enumerate_uvd(len)? {
                    table[len][s.stats().vox as usize] += 1;
                }
            }
            for t in 0..=u_order {
                let dt = d0.pow(t as u32 + 1);
                for len in 1..=UVD_ORACLE.min(n) {
                    ck.value("[x^n] D_0^{t+1} = |UVD_{n,t}|", Some(t), len, dt.coeff(len), table_entry(&table, len, t));
                }
            }
        }
        IdentityId::SumDExpansion => {
            let d0 = series_d0(n);
            let y = x_minus_x2(n);
            for t in 0..=u_order {
                let lagrange = TruncatedSeries::new(
                    (0..=n as i64)
                        .map(|m| {
                            if m < t as i64 + 1 {
                                BigRational::zero()
                            } else {
                                let ti = t as i64;
                                BigRational::new(binom(3 * m - ti - 2, m - ti - 1) * (ti + 1), BigInt::from(m))
                            }
                        })
                        .collect(),
                    n,
                );
                let dt = d0.pow(t as u32 + 1);
                ck.series("D_0^{t+1} = sum_n (t+1)/n binom(3n-t-2, n-t-1) (x - x^2)^n", Some(t), &dt, &lagrange.compose(&y)?);
                for len in t + 1..=n {
                    ck.value("[x^n] D_0^{t+1} = |IS_{n,t}(102)|", Some(t), len, dt.coeff(len), count_102_rank(len, t)?.0);
                }
            }
        }
        IdentityId::CatalanFix => {
            let c = &k.c;
            ck.series("C = 1 + x C^2", None, c, &(&k.one + &(&k.x * &c.pow(2))));
            ck.series("C = 1 / (1 - x C)", None, c, &(&k.one - &k.xc).inv()?);
            ck.series("1 - C = -x C^2", None, &(&k.one - c), &-&(&k.x * &c.pow(2)));
            for m in 0..=n {
                ck.value("[x^n] C = Catalan(n)", None, m, c.coeff(m), catalan(m as i64));
            }
        }
        IdentityId::CatalanSqrt => {
            let c = &k.c;
            let lhs = c.div(&(&k.one - &(&k.x * &c.pow(2))))?;
            ck.series("C / (1 - x C^2) = (1-4x)^{-1/2}", None, &lhs, &inv_sqrt1m4x(n));
            ck.series("1 - sqrt(1-4x) = 2 x C", None, &(&k.one - &sqrt1m4x(n)), &k.xc.scale_int(2));
            ck.series("sqrt(1-4x)^2 = 1 - 4x", None, &sqrt1m4x(n).pow(2), &(&k.one - &k.x.scale_int(4)));
        }
        IdentityId::A0Closed => {
            let rec = series_a0_recursive(n);
            let closed = series_a0_closed(n);
            ck.series("A_0 (decomposition) = C + x^2 C^3 / ((1-x) sqrt(1-4x))", None, &rec, &closed);
            let table = lf_table(LF_ORACLE.min(n), in_class_210a)?;
            for t in 0..=u_order {
                let at = series_a_t(&k, &closed, t);
                let direct = &(&TruncatedSeries::monomial(t, n) * &k.c.pow(t as u32 + 1))
                    + &(&(&closed - &k.c) * &k.xc_pow(t)).scale_int(t as i64 + 1);
                ck.series("x^t C^{t+1} + (t+1)(A_0 - C) x^t C^t = ((t+1)A_0 - tC)(xC)^t", Some(t), &direct, &at);
                for len in 0..=LF_ORACLE.min(n) {
                    ck.value("[x^n] A_t = |LFa_{n,t}|", Some(t), len, at.coeff(len), table_entry(&table, len, t));
                }
            }
        }
        IdentityId::B0Closed => {
            let sum = series_b0_sum(n);
            let closed = series_b0_closed(n);
            ck.series("double sum = x^4 C^7 / (1-x)", None, &sum, &closed);
            let tilde = lf_table(LF_ORACLE.min(n), in_class_210b_tilde)?;
            let full = lf_table(LF_ORACLE.min(n), in_class_210b)?;
            let bt = BivariateSeries::from_fn(u_order, |t| &k.xc_pow(t) * &closed);
            let b = bt.mul(&BivariateSeries::geometric_in_u(&k.x, u_order));
            for t in 0..=u_order {
                for len in 0..=LF_ORACLE.min(n) {
                    ck.value("[x^n] (xC)^t B~_0 = |LFb~_{n,t}|", Some(t), len, bt.u_coeff(t).coeff(len), table_entry(&tilde, len, t));
                    ck.value("[x^n u^t] B~/(1-ux) = |LFb_{n,t}|", Some(t), len, b.u_coeff(t).coeff(len), table_entry(&full, len, t));
                }
            }
        }
        IdentityId::GCoeff => {
            let a0 = series_a0_closed(n);
            let a = BivariateSeries::from_fn(u_order, |t| series_a_t(&k, &a0, t));
            let bt = BivariateSeries::from_fn(u_order, |t| &k.xc_pow(t) * &series_b0_closed(n));
            let g = a.add(&bt.mul(&BivariateSeries::geometric_in_u(&k.x, u_order)));
            let table = lf_table(LF_ORACLE.min(n), in_class_210)?;
            for t in 0..=u_order {
                let closed = series_g_t(n, t);
                ck.series("[u^t] G closed form = [u^t](A + B)", Some(t), &closed, g.u_coeff(t));
                for len in 0..=LF_ORACLE.min(n) {
                    ck.value("[x^n u^t] G = |LF_{n,t}(210)|", Some(t), len, closed.coeff(len), table_entry(&table, len, t));
                }
                for len in t + 2..=n + 1 {
                    ck.value("[x^{n-1} u^t] G = |IS_{n,t}(102,210)| formula", Some(t), len - 1, closed.coeff(len - 1), count_pair_rank(Tau::T210, len, t)?.0);
                }
            }
        }
        IdentityId::H0Closed => {
            let rec = series_h0_recursive(n);
            let closed = series_h0_closed(n);
            ck.series("H_0 (decomposition) = (1-2x) / ((1-x) sqrt(1-4x))", None, &rec, &closed);
            let table = lf_table(LF_ORACLE.min(n), in_class_110)?;
            for t in 0..=u_order {
                let ht = &k.xc_pow(t) * &closed;
                for len in 0..=LF_ORACLE.min(n) {
                    ck.value("[x^n] (xC)^t H_0 = |LF_{n,t}(110)|", Some(t), len, ht.coeff(len), table_entry(&table, len, t));
                }
            }
        }
        IdentityId::HCoeff => {
            let h0 = series_h0_closed(n);
            let table = lf_table(LF_ORACLE.min(n), in_class_110)?;
            let prefactor = &k.one - &(&k.x * &k.geo);
            for t in 0..=u_order {
                let ht = &h0 * &k.xc_pow(t);
                let central = TruncatedSeries::from_ints(
                    (0..=n as i64).map(|m| binom(2 * m - t as i64, m - t as i64)),
                    n,
                );
                ck.series("[u^t] H = (1 - x - x^2 - ..) sum_n binom(2n-t, n-t) x^n", Some(t), &ht, &(&prefactor * &central));
                for len in 0..=LF_ORACLE.min(n) {
                    ck.value("[x^n u^t] H = |LF_{n,t}(110)|", Some(t), len, ht.coeff(len), table_entry(&table, len, t));
                }
                for len in t + 2..=n + 1 {
                    ck.value("[x^{n-1} u^t] H = |IS_{n,t}(102,110)| formula", Some(t), len - 1, ht.coeff(len - 1), count_pair_rank(Tau::T110, len, t)?.0);
                }
            }
        }
    }
    Ok(IdentityReport { id, order, u_order, holds: ck.mismatch.is_none(), relations: ck.relations, first_mismatch: ck.mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.to_integers().unwrap().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(ints(&inv_sqrt1m4x(4)), vec![1, 2, 6, 20, 70]);
        let c = catalan_series(5);
        assert_eq!(ints(&c), vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(ints(&(&c.truncate(3) * &c.truncate(3))), vec![1, 2, 5, 14]);
        assert_eq!(ints(&geometric(3).inv().unwrap()), vec![1, -1, 0, 0]);
        assert_eq!(TruncatedSeries::x(3).inv(), Err(Error::NonInvertibleConstantTerm));
        assert_eq!(c.compose(&c), Err(Error::BadComposition));
    }

    #[test]
    fn binary_ops_align_to_min_order() {
        let a = geometric(5);
        let b = geometric(3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
    }

    #[test]
    fn compose_with_x_minus_x2() {
        // 1/(1-y) at y = x - x^2
        let g = geometric(6).compose(&x_minus_x2(6)).unwrap();
        let direct = (&TruncatedSeries::one(6) - &x_minus_x2(6)).inv().unwrap();
        assert_eq!(g, direct);
    }

    #[test]
    fn fixed_points() {
        assert_eq!(ints(&series_a(6)), vec![1, 1, 2, 6, 22, 89, 381]);
        assert_eq!(ints(&series_d(6)), vec![0, 1, 2, 6, 22, 89, 381]);
        let e = series_e(5);
        assert_eq!(ints(&e), vec![0, 1, 2, 7, 30, 143]);
        assert_eq!(ints(&series_h0_closed(4)), vec![1, 1, 3, 11, 41]);
        assert_eq!(series_h0_recursive(10), series_h0_closed(10));
    }

    #[test]
    fn every_identity_holds_at_small_order() {
        for id in IdentityId::ALL {
            let r = verify_identity(id, 10, 3).unwrap();
            assert!(r.holds, "{id}: {:?}", r.first_mismatch);
            assert!(r.relations > 0);
        }
    }

    #[test]
    fn g_coefficient_example() {
        assert_eq!(series_g_t(4, 0).coeff(2), q(3));
    }

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.as_str()));
        }
        assert!("NOPE".parse::<IdentityId>().is_err());
        assert!(verify_identity(IdentityId::ACubic, 40, 2).is_err());
    }
}
