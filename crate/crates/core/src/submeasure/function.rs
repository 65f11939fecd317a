use num::traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeValue;
use crate::numeric::{ExtRational, Scalar};
use crate::setring::{FiniteSet, Ring};

/// A set function tabulated over every member of a ring.
///
/// All property checkers operate on this form. `slack` is zero for exact
/// tables; tables holding floored approximations of irrational values carry
/// the declared comparison slack, and a comparison is only reported as
/// violated when it is violated by more than the slack.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetFunction {
    domain: Ring,
    dim: usize,
    values: Vec<LatticeValue>,
    norms: Vec<ExtRational>,
    slack: Scalar,
}

#[derive(Serialize)]
struct Entry<'a> {
    set: FiniteSet,
    value: &'a LatticeValue,
    norm: &'a ExtRational,
}

impl Serialize for SetFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.domain.iter().zip(&self.values).zip(&self.norms).map(|((set, value), norm)| Entry {
            set: *set,
            value,
            norm,
        }))
    }
}

impl SetFunction {
    pub fn from_fn<F>(domain: Ring, dim: usize, slack: Scalar, mut f: F) -> Result<Self>
    where
        F: FnMut(&FiniteSet) -> Result<LatticeValue>,
    {
        let values = domain.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        SetFunction::from_values(domain, dim, slack, values)
    }

    pub(crate) fn from_values(domain: Ring, dim: usize, slack: Scalar, values: Vec<LatticeValue>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        assert_eq!(values.len(), domain.len());
        for v in &values {
            if let Some(d) = v.dim() {
                if d != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: d });
                }
            }
        }
        let norms = values.iter().map(LatticeValue::norm).collect();
        Ok(SetFunction {
            domain,
            dim,
            values,
            norms,
            slack,
        })
    }

    /// An exact function from explicit `(set, value)` pairs covering the ring.
    pub fn from_table<'a, I>(domain: Ring, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a FiniteSet, &'a LatticeValue)>,
    {
        let mut slots: Vec<Option<LatticeValue>> = vec![None; domain.len()];
        for (s, v) in entries {
            let i = domain.index_of(s).ok_or(Error::SetOutsideRing(*s))?;
            slots[i] = Some(v.clone());
        }
        let values = slots
            .into_iter()
            .zip(domain.iter())
            .map(|(v, s)| v.ok_or_else(|| Error::InvalidRule(format!("table has no value for {s}"))))
            .collect::<Result<Vec<_>>>()?;
        SetFunction::from_values(domain, dim, Scalar::zero(), values)
    }

    pub fn domain(&self) -> &Ring {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slack(&self) -> &Scalar {
        &self.slack
    }

    pub fn is_exact(&self) -> bool {
        self.slack.is_zero()
    }

    pub fn value(&self, a: &FiniteSet) -> Result<&LatticeValue> {
        self.domain
            .index_of(a)
            .map(|i| &self.values[i])
            .ok_or(Error::SetOutsideRing(*a))
    }

    pub fn norm(&self, a: &FiniteSet) -> Result<&ExtRational> {
        self.domain
            .index_of(a)
            .map(|i| &self.norms[i])
            .ok_or(Error::SetOutsideRing(*a))
    }

    /// Norm of a set already known to be in the domain (results of ring
    /// operations on members).
    pub(crate) fn n(&self, a: &FiniteSet) -> &ExtRational {
        let i = self.domain.index_of(a).expect("ring operations stay in the domain");
        &self.norms[i]
    }

    pub(crate) fn v(&self, a: &FiniteSet) -> &LatticeValue {
        let i = self.domain.index_of(a).expect("ring operations stay in the domain");
        &self.values[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FiniteSet, &LatticeValue)> {
        self.domain.iter().zip(&self.values)
    }

    pub fn norms(&self) -> impl Iterator<Item = (&FiniteSet, &ExtRational)> {
        self.domain.iter().zip(&self.norms)
    }

    pub fn is_order_bounded(&self) -> bool {
        !self.values.iter().any(LatticeValue::is_top)
    }

    /// Restriction to a subring of the domain.
    pub fn restrict(&self, sub: &Ring) -> Result<SetFunction> {
        let values = sub
            .iter()
            .map(|s| self.value(s).cloned())
            .collect::<Result<Vec<_>>>()?;
        SetFunction::from_values(sub.clone(), self.dim, self.slack.clone(), values)
    }

    /// `x > y + slack`.
    pub fn exceeds(&self, x: &ExtRational, y: &ExtRational) -> bool {
        match (x, y) {
            (_, ExtRational::Infinite) => false,
            (ExtRational::Infinite, _) => true,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => *a > b + &self.slack,
        }
    }

    /// `x ≥ y + slack`.
    pub fn reaches(&self, x: &ExtRational, y: &ExtRational) -> bool {
        match (x, y) {
            (ExtRational::Infinite, _) => true,
            (ExtRational::Finite(_), ExtRational::Infinite) => false,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => *a >= b + &self.slack,
        }
    }

    /// `|x − y| > slack`.
    pub fn differs(&self, x: &ExtRational, y: &ExtRational) -> bool {
        self.exceeds(x, y) || self.exceeds(y, x)
    }
}

impl AsRef<SetFunction> for SetFunction {
    fn as_ref(&self) -> &SetFunction {
        self
    }
}
