//! Scalar field abstraction.
//!
//! Every [`Space`](crate::Space) is generic over one scalar type. [`Rational`]
//! is lossless and is used for every identity; `f64` is the approximate
//! regime used by limit experiments at large `n`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational.
pub type Rational = BigRational;

/// Coordinates above this count as strictly positive in the approximate regime.
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

/// Relative tolerance used by [`Scalar::approx_eq`] for `f64`.
pub const FLOAT_EQ_TOLERANCE: f64 = 1e-9;

/// Absolute slack used by [`Scalar::approx_le`] for `f64`.
pub const FLOAT_LE_TOLERANCE: f64 = 1e-10;

/// JSON form of a scalar: exact values travel as `"num/den"` strings,
/// approximate values as plain numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Number(f64),
    Text(String),
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for the lossless regime.
    const EXACT: bool;

    fn from_i64(value: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Whether the value generates a nonzero band (`> 0`, or `> 1e-12` when approximate).
    fn is_support(&self) -> bool;

    /// Equality, exact or within [`FLOAT_EQ_TOLERANCE`] (relative).
    fn approx_eq(&self, other: &Self) -> bool;

    /// `self <= other`, exact or with [`FLOAT_LE_TOLERANCE`] slack.
    fn approx_le(&self, other: &Self) -> bool;

    /// Binomial probabilities `C(n, j) p^j (1-p)^(n-j)` for `j = 0..=n`.
    ///
    /// The approximate regime evaluates in log space and renormalizes the row
    /// to sum to one.
    fn binomial_row(n: usize, p: &Self) -> Vec<Self>;

    /// The single term `C(n, j) p^j (1-p)^(n-j)`, without renormalization
    /// (log space when approximate).
    fn binomial_term(n: usize, j: usize, p: &Self) -> Self;

    fn encode(&self) -> ScalarRepr;

    fn decode(repr: &ScalarRepr) -> Result<Self>;

    /// Parses `"3"`, `"-2/7"`, `"0.125"` (and, for `f64`, anything `f64::from_str` takes).
    fn parse(text: &str) -> Result<Self>;

    fn powi(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = exp;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn max_of(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn min_of(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    if t.contains('/') {
        let r = Rational::from_str(t).map_err(|_| Error::Parse(format!("bad rational `{t}`")))?;
        return Ok(r);
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal `{t}`")));
        }
        let mut num = BigInt::from_str(&digits).map_err(|_| Error::Parse(format!("bad decimal `{t}`")))?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(Rational::new(num, den));
    }
    let n = BigInt::from_str(t).map_err(|_| Error::Parse(format!("bad integer `{t}`")))?;
    Ok(Rational::from_integer(n))
}

/// `ln C(n, k)` as a sum of `min(k, n-k)` logarithms of ratios.
fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_support(&self) -> bool {
        self.is_positive()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn approx_le(&self, other: &Self) -> bool {
        self <= other
    }

    fn binomial_row(n: usize, p: &Self) -> Vec<Self> {
        let q = Self::one() - p.clone();
        // p^j and q^(n-j) for all j, built incrementally.
        let mut p_pow = Vec::with_capacity(n + 1);
        let mut q_pow = Vec::with_capacity(n + 1);
        p_pow.push(Self::one());
        q_pow.push(Self::one());
        for i in 1..=n {
            p_pow.push(p_pow[i - 1].clone() * p.clone());
            q_pow.push(q_pow[i - 1].clone() * q.clone());
        }
        let mut coeff = BigInt::one();
        (0..=n)
            .map(|j| {
                if j > 0 {
                    coeff = coeff.clone() * BigInt::from(n - j + 1) / BigInt::from(j);
                }
                Rational::from_integer(coeff.clone()) * p_pow[j].clone() * q_pow[n - j].clone()
            })
            .collect()
    }

    fn binomial_term(n: usize, j: usize, p: &Self) -> Self {
        let q = Self::one() - p.clone();
        Rational::from_integer(binomial_big(n, j)) * p.powi(j) * q.powi(n - j)
    }

    fn encode(&self) -> ScalarRepr {
        ScalarRepr::Text(self.to_string())
    }

    fn decode(repr: &ScalarRepr) -> Result<Self> {
        match repr {
            ScalarRepr::Text(t) => parse_rational(t),
            ScalarRepr::Number(x) if x.fract() == 0.0 && f64::abs(*x) < 9.0e15 => Ok(Self::from_i64(*x as i64)),
            ScalarRepr::Number(x) => {
                Err(Error::Parse(format!("exact scalar given as float {x}; write it as a \"num/den\" string")))
            }
        }
    }

    fn parse(text: &str) -> Result<Self> {
        parse_rational(text)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_support(&self) -> bool {
        *self > SUPPORT_TOLERANCE
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1.0_f64.max(f64::abs(*self)).max(f64::abs(*other));
        (self - other).abs() <= FLOAT_EQ_TOLERANCE * scale
    }

    fn approx_le(&self, other: &Self) -> bool {
        *self <= *other + FLOAT_LE_TOLERANCE
    }

    fn binomial_row(n: usize, p: &Self) -> Vec<Self> {
        let p = *p;
        if p <= 0.0 || p >= 1.0 {
            let hit = if p <= 0.0 { 0 } else { n };
            return (0..=n).map(|j| if j == hit { 1.0 } else { 0.0 }).collect();
        }
        let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
        let mut ln_coeff = 0.0;
        let logs: Vec<f64> = (0..=n)
            .map(|j| {
                if j > 0 {
                    ln_coeff += ((n - j + 1) as f64 / j as f64).ln();
                }
                ln_coeff + j as f64 * ln_p + (n - j) as f64 * ln_q
            })
            .collect();
        let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    fn binomial_term(n: usize, j: usize, p: &Self) -> Self {
        let p = *p;
        if p <= 0.0 || p >= 1.0 {
            let hit = if p <= 0.0 { 0 } else { n };
            return if j == hit { 1.0 } else { 0.0 };
        }
        let log = ln_binomial(n, j) + j as f64 * p.ln() + (n - j) as f64 * (-p).ln_1p();
        log.exp()
    }

    fn encode(&self) -> ScalarRepr {
        ScalarRepr::Number(*self)
    }

    fn decode(repr: &ScalarRepr) -> Result<Self> {
        match repr {
            ScalarRepr::Number(x) => Ok(*x),
            ScalarRepr::Text(t) => Self::parse(t),
        }
    }

    fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Ok(x) = f64::from_str(t) {
            return Ok(x);
        }
        parse_rational(t).map(|r| Scalar::to_f64(&r))
    }
}

/// Exact binomial coefficient as a scalar.
pub fn binomial<S: Scalar>(n: usize, k: usize) -> S {
    assert!(k <= n, "binomial({n}, {k})");
    let c = binomial_big(n, k);
    if S::EXACT {
        S::decode(&ScalarRepr::Text(c.to_string())).expect("integer literal")
    } else {
        S::decode(&ScalarRepr::Number(c.to_f64().unwrap_or(f64::INFINITY))).expect("float literal")
    }
}

/// `n!` as a scalar.
pub fn factorial<S: Scalar>(n: usize) -> S {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    if S::EXACT {
        S::decode(&ScalarRepr::Text(acc.to_string())).expect("integer literal")
    } else {
        S::decode(&ScalarRepr::Number(acc.to_f64().unwrap_or(f64::INFINITY))).expect("float literal")
    }
}
