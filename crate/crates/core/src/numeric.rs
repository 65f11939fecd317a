//! Exact rational scalars, the extended (possibly infinite) nonnegative
//! values used for norms and moduli, and fixed-precision roots.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// Decimal digits kept when a root has no exact rational value.
pub const APPROX_DIGITS: u32 = 40;

/// Comparison slack applied to set functions carrying approximated values.
pub fn comparison_slack() -> Scalar {
    Scalar::new(BigInt::one(), BigInt::from(10u32).pow(30u32))
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// `2^{-j}`.
pub fn pow2_neg(j: u32) -> Scalar {
    Scalar::new(BigInt::one(), BigInt::one() << j as usize)
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `n` or `n/d`.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n`, `n/d`, or a decimal such as `0.25` or `1e-6` into an exact rational.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Scalar::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Scalar::from_integer(all * ten.pow(scale as u32))
    } else {
        Scalar::new(all, ten.pow((-scale) as u32))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// `x^(num/den)` for `x ≥ 0` and `0 < num/den`. Returns the value and whether
/// it is exact; inexact results are floored to [`APPROX_DIGITS`] decimals,
/// which keeps the map monotone in `x`.
pub fn rational_power(x: &Scalar, num: u32, den: u32) -> (Scalar, bool) {
    assert!(!x.is_negative() && num > 0 && den > 0);
    let raised: Scalar = Pow::pow(x, num);
    if den == 1 {
        return (raised, true);
    }
    let n = raised.numer().clone();
    let d = raised.denom().clone();
    let rn = n.nth_root(den);
    let rd = d.nth_root(den);
    if Pow::pow(&rn, den) == n && Pow::pow(&rd, den) == d {
        return (Scalar::new(rn, rd), true);
    }
    let ten = BigInt::from(10u32);
    let scaled = n * Pow::pow(&ten, APPROX_DIGITS * den) / d;
    let root = scaled.nth_root(den);
    (Scalar::new(root, Pow::pow(&ten, APPROX_DIGITS)), false)
}

/// A nonnegative rational or `+∞`; norms of lattice values and the moduli δ
/// live here.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtRational {
    Finite(Scalar),
    Infinite,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Scalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRational::Finite(x) if x.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            ExtRational::Finite(x) => Some(x),
            ExtRational::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(x) => to_f64(x),
            ExtRational::Infinite => f64::INFINITY,
        }
    }

    pub fn plus(&self, x: &Scalar) -> ExtRational {
        match self {
            ExtRational::Finite(v) => ExtRational::Finite(v + x),
            ExtRational::Infinite => ExtRational::Infinite,
        }
    }

    pub fn min(self, other: ExtRational) -> ExtRational {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<Scalar> for ExtRational {
    fn from(x: Scalar) -> Self {
        ExtRational::Finite(x)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinite) => Ordering::Less,
            (ExtRational::Infinite, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinite, ExtRational::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for &ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinite,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(x) => f.write_str(&format_scalar(x)),
            ExtRational::Infinite => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Serializes a scalar as its exact `n/d` text.
pub fn serialize_scalar<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x))
}
