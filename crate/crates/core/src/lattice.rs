//! The value space Λ̄: nonnegative rational vectors of a fixed dimension,
//! ordered componentwise and normed by ℓ₁, plus a top element λ that
//! dominates every vector.
//!
//! ℓ₁ on the positive cone is additive (`‖x + y‖ = ‖x‖ + ‖y‖`) and monotone,
//! which is all the AL-space structure the checkers rely on. λ has norm
//! `+∞`, absorbs addition and is fixed by positive scaling.

use std::fmt;

use num::traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{format_scalar, parse_scalar, ExtRational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LatticeValue {
    Top,
    Vector(Vec<Scalar>),
}

impl LatticeValue {
    /// A cone element; rejects negative components and empty vectors.
    pub fn vector(components: Vec<Scalar>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(c) = components.iter().find(|c| c.is_negative()) {
            return Err(Error::NegativeComponent(format_scalar(c)));
        }
        Ok(LatticeValue::Vector(components))
    }

    pub fn zero(dim: usize) -> Self {
        LatticeValue::Vector(vec![Scalar::zero(); dim])
    }

    pub fn from_ints(components: &[i64]) -> Self {
        LatticeValue::vector(components.iter().map(|&c| crate::numeric::int(c)).collect())
            .expect("nonnegative integer components")
    }

    pub fn is_top(&self) -> bool {
        matches!(self, LatticeValue::Top)
    }

    /// `None` for λ.
    pub fn dim(&self) -> Option<usize> {
        match self {
            LatticeValue::Top => None,
            LatticeValue::Vector(v) => Some(v.len()),
        }
    }

    pub fn components(&self) -> Option<&[Scalar]> {
        match self {
            LatticeValue::Top => None,
            LatticeValue::Vector(v) => Some(v),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LatticeValue::Top => false,
            LatticeValue::Vector(v) => v.iter().all(Zero::is_zero),
        }
    }

    /// ℓ₁ norm; `+∞` at λ.
    pub fn norm(&self) -> ExtRational {
        match self {
            LatticeValue::Top => ExtRational::Infinite,
            LatticeValue::Vector(v) => ExtRational::Finite(v.iter().sum()),
        }
    }

    /// Componentwise order, with λ above everything.
    pub fn le(&self, other: &LatticeValue) -> bool {
        match (self, other) {
            (_, LatticeValue::Top) => true,
            (LatticeValue::Top, LatticeValue::Vector(_)) => false,
            (LatticeValue::Vector(a), LatticeValue::Vector(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
            }
        }
    }

    pub fn add(&self, other: &LatticeValue) -> Result<LatticeValue> {
        match (self, other) {
            (LatticeValue::Top, _) | (_, LatticeValue::Top) => Ok(LatticeValue::Top),
            (LatticeValue::Vector(a), LatticeValue::Vector(b)) => {
                same_dim(a.len(), b.len())?;
                Ok(LatticeValue::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
        }
    }

    /// Scaling by `c ≥ 0`; `0·λ` is taken to be the zero vector of `dim`.
    pub fn scale(&self, c: &Scalar, dim: usize) -> LatticeValue {
        debug_assert!(!c.is_negative());
        match self {
            LatticeValue::Top if c.is_zero() => LatticeValue::zero(dim),
            LatticeValue::Top => LatticeValue::Top,
            LatticeValue::Vector(v) => LatticeValue::Vector(v.iter().map(|x| x * c).collect()),
        }
    }

    pub fn join(&self, other: &LatticeValue) -> Result<LatticeValue> {
        match (self, other) {
            (LatticeValue::Top, _) | (_, LatticeValue::Top) => Ok(LatticeValue::Top),
            (LatticeValue::Vector(a), LatticeValue::Vector(b)) => {
                same_dim(a.len(), b.len())?;
                Ok(LatticeValue::Vector(
                    a.iter().zip(b).map(|(x, y)| x.max(y).clone()).collect(),
                ))
            }
        }
    }

    pub fn meet(&self, other: &LatticeValue) -> Result<LatticeValue> {
        match (self, other) {
            (LatticeValue::Top, x) | (x, LatticeValue::Top) => Ok(x.clone()),
            (LatticeValue::Vector(a), LatticeValue::Vector(b)) => {
                same_dim(a.len(), b.len())?;
                Ok(LatticeValue::Vector(
                    a.iter().zip(b).map(|(x, y)| x.min(y).clone()).collect(),
                ))
            }
        }
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// ℓ₁ distance `‖a − b‖` between two values (the difference may leave the
/// cone); `+∞` if either is λ.
pub fn l1_distance(a: &LatticeValue, b: &LatticeValue) -> Result<ExtRational> {
    match (a, b) {
        (LatticeValue::Vector(x), LatticeValue::Vector(y)) => {
            same_dim(x.len(), y.len())?;
            Ok(ExtRational::Finite(x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum()))
        }
        _ => Ok(ExtRational::Infinite),
    }
}

impl fmt::Display for LatticeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeValue::Top => f.write_str("top"),
            LatticeValue::Vector(v) => {
                f.write_str("(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(&format_scalar(c))?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for LatticeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LatticeValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `(a/b, c/d, …)` or `top`.
pub fn parse_value(text: &str) -> Result<LatticeValue> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("top") {
        return Ok(LatticeValue::Top);
    }
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("vector literal must be parenthesized: {t:?}")))?;
    let comps = inner
        .split(',')
        .map(parse_scalar)
        .collect::<Result<Vec<_>>>()?;
    LatticeValue::vector(comps)
}

fn check_family_dims(vs: &[LatticeValue]) -> Result<()> {
    let mut dim = None;
    for v in vs {
        if let Some(d) = v.dim() {
            match dim {
                None => dim = Some(d),
                Some(e) => same_dim(e, d)?,
            }
        }
    }
    Ok(())
}

/// Componentwise supremum; any λ makes the supremum λ.
pub fn lattice_sup(vs: &[LatticeValue]) -> Result<LatticeValue> {
    let (first, rest) = vs.split_first().ok_or(Error::EmptyFamily)?;
    check_family_dims(vs)?;
    rest.iter().try_fold(first.clone(), |acc, v| acc.join(v))
}

/// Componentwise infimum; λ members are ignored when a vector member exists.
pub fn lattice_inf(vs: &[LatticeValue]) -> Result<LatticeValue> {
    let (first, rest) = vs.split_first().ok_or(Error::EmptyFamily)?;
    check_family_dims(vs)?;
    rest.iter().try_fold(first.clone(), |acc, v| acc.meet(v))
}

/// An order interval `[lo, hi]` of vectors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OrderInterval {
    pub lo: LatticeValue,
    pub hi: LatticeValue,
}

impl OrderInterval {
    pub fn new(lo: LatticeValue, hi: LatticeValue) -> Result<Self> {
        if lo.is_top() || hi.is_top() {
            return Err(Error::InvalidRule("order interval endpoints must be vectors".into()));
        }
        if !lo.le(&hi) {
            return Err(Error::InvalidRule(format!("empty order interval [{lo}, {hi}]")));
        }
        Ok(OrderInterval { lo, hi })
    }

    pub fn contains(&self, v: &LatticeValue) -> bool {
        self.lo.le(v) && v.le(&self.hi)
    }
}

/// Finite vector families are bounded by their componentwise extrema; a
/// family containing λ is not order bounded. The empty family gets `[0, 0]`.
pub fn is_order_bounded(values: &[LatticeValue], dim: usize) -> Result<Option<OrderInterval>> {
    if values.iter().any(LatticeValue::is_top) {
        return Ok(None);
    }
    if values.is_empty() {
        return OrderInterval::new(LatticeValue::zero(dim), LatticeValue::zero(dim)).map(Some);
    }
    let lo = lattice_inf(values)?;
    let hi = lattice_sup(values)?;
    OrderInterval::new(lo, hi).map(Some)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Down,
    Up,
}

/// Outcome of [`check_directed_norm_limit`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedLimit {
    pub direction: Direction,
    /// The infimum (down) or supremum (up) of the family, which a finite
    /// directed family contains.
    pub extremum: LatticeValue,
    pub extremum_norm: ExtRational,
    /// Minimum (down) or maximum (up) of the member norms.
    pub member_norm_bound: ExtRational,
    pub holds: bool,
}

/// For a directed family, the norm of the extremum equals the extremal
/// member norm (`inf ‖fᵢ‖ = ‖inf fᵢ‖`, or the supremum analogue).
pub fn check_directed_norm_limit(family: &[LatticeValue], direction: Direction) -> Result<DirectedLimit> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    check_family_dims(family)?;
    let below = |x: &LatticeValue, y: &LatticeValue| match direction {
        Direction::Down => x.le(y),
        Direction::Up => y.le(x),
    };
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            if !family.iter().any(|z| below(z, x) && below(z, y)) {
                return Err(Error::NotDirected(x.to_string(), y.to_string()));
            }
        }
    }
    let extremum = family
        .iter()
        .find(|z| family.iter().all(|x| below(z, x)))
        .expect("a finite directed family contains its extremum")
        .clone();
    let norms = family.iter().map(LatticeValue::norm);
    let member_norm_bound = match direction {
        Direction::Down => norms.min(),
        Direction::Up => norms.max(),
    }
    .expect("nonempty");
    let extremum_norm = extremum.norm();
    let lattice_extremum = match direction {
        Direction::Down => lattice_inf(family)?,
        Direction::Up => lattice_sup(family)?,
    };
    let holds = extremum_norm == member_norm_bound && lattice_extremum == extremum;
    Ok(DirectedLimit {
        direction,
        extremum,
        extremum_norm,
        member_norm_bound,
        holds,
    })
}
