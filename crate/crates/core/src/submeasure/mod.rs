//! Lattice-valued set functions on finite rings and the exact checkers for
//! monotonicity, continuity, (s.c.)/(u.s.c.), the p.g.p., exhaustivity and
//! the D / D_u / D_s / D_a classification.

mod checks;
mod distortion;
mod function;
mod moduli;

use std::collections::BTreeMap;

use num::traits::{Signed, Zero};
use serde::Serialize;

pub use checks::{
    check_ac_condition, check_continuity, check_exhaustive, check_monotone, check_sigma_subadditive,
    check_subadditive, check_additive, classify, search_ac_counterexamples, AcSearch, ClassFlags, Classification,
    SubmeasureClass,
};
pub use distortion::DistortionId;
pub use function::SetFunction;
pub use moduli::{
    ac_modulus, check_sc_equivalence, check_usc_equivalence, delta_sequence, pgp_modulus, sc_modulus,
    sample_chained_union_bound, standard_grid, usc_modulus, verdict_grid, verify_chained_union_bound, DeltaSequence, EquivalenceCheck,
    Modulus, DELTA_POLICY,
};

use crate::choquet::{choquet_integral, Density};
use crate::error::{Error, Result};
use crate::lattice::LatticeValue;
use crate::numeric::{comparison_slack, Scalar};
use crate::setring::{FiniteSet, Ring};

/// How a submeasure computes its values.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rule {
    /// `μ(A) = Σ_{t∈A} w(t)`.
    Additive { weights: Vec<LatticeValue> },
    /// `μ(A) = g(Σ_{t∈A} w(t)) · direction`.
    Distorted {
        #[serde(serialize_with = "serialize_scalars")]
        base_weights: Vec<Scalar>,
        distortion: DistortionId,
        #[serde(serialize_with = "serialize_scalars")]
        direction: Vec<Scalar>,
    },
    Table { entries: BTreeMap<FiniteSet, LatticeValue> },
    /// `μ(A) = (C)∫_A f d(base)`.
    ChoquetDerived { base: Box<Submeasure>, density: Density },
}

fn serialize_scalars<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::numeric::format_scalar))
}

/// A set function `μ : R → Λ̄` on a finite ring, given by a rule and
/// tabulated at construction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Submeasure {
    rule: Rule,
    #[serde(skip)]
    table: SetFunction,
}

impl Submeasure {
    pub fn additive(ring: Ring, weights: Vec<LatticeValue>) -> Result<Self> {
        if weights.len() != ring.universe_size() {
            return Err(Error::InvalidRule(format!(
                "{} weights for a universe of size {}",
                weights.len(),
                ring.universe_size()
            )));
        }
        let dim = weights
            .iter()
            .find_map(LatticeValue::dim)
            .ok_or_else(|| Error::InvalidRule("additive weights need at least one vector".into()))?;
        let table = SetFunction::from_fn(ring, dim, Scalar::zero(), |a| {
            a.points()
                .try_fold(LatticeValue::zero(dim), |acc, t| acc.add(&weights[t]))
        })?;
        Ok(Submeasure {
            rule: Rule::Additive { weights },
            table,
        })
    }

    pub fn distorted(
        ring: Ring,
        base_weights: Vec<Scalar>,
        distortion: DistortionId,
        direction: Vec<Scalar>,
    ) -> Result<Self> {
        if base_weights.len() != ring.universe_size() {
            return Err(Error::InvalidRule(format!(
                "{} base weights for a universe of size {}",
                base_weights.len(),
                ring.universe_size()
            )));
        }
        if base_weights.iter().chain(&direction).any(Signed::is_negative) {
            return Err(Error::InvalidRule("negative weight or direction component".into()));
        }
        let dim = direction.len();
        let mut exact = true;
        let table = {
            let values = ring
                .iter()
                .map(|a| {
                    let total: Scalar = a.points().map(|t| &base_weights[t]).sum();
                    let (g, ok) = distortion.apply(&total);
                    exact &= ok;
                    LatticeValue::vector(direction.iter().map(|d| d * &g).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            let slack = if exact { Scalar::zero() } else { comparison_slack() };
            SetFunction::from_values(ring, dim, slack, values)?
        };
        Ok(Submeasure {
            rule: Rule::Distorted {
                base_weights,
                distortion,
                direction,
            },
            table,
        })
    }

    pub fn table(ring: Ring, dim: usize, entries: BTreeMap<FiniteSet, LatticeValue>) -> Result<Self> {
        if let Some(s) = entries.keys().find(|s| !ring.contains(s)) {
            return Err(Error::SetOutsideRing(*s));
        }
        let table = SetFunction::from_table(ring, dim, entries.iter())?;
        Ok(Submeasure {
            rule: Rule::Table { entries },
            table,
        })
    }

    /// Tabulates `f` over the ring into a table rule.
    pub fn table_from_fn<F>(ring: Ring, dim: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&FiniteSet) -> LatticeValue,
    {
        let entries = ring.iter().map(|s| (*s, f(s))).collect();
        Submeasure::table(ring, dim, entries)
    }

    pub fn zero(ring: Ring, dim: usize) -> Result<Self> {
        let n = ring.universe_size();
        Submeasure::additive(ring, vec![LatticeValue::zero(dim); n])
    }

    /// `ν_f(A) = (C)∫_A f dμ` on the same ring.
    pub fn choquet_derived(base: Submeasure, density: Density) -> Result<Self> {
        let ring = base.domain().clone();
        let dim = base.dim();
        let values = ring
            .iter()
            .map(|a| choquet_integral(base.as_set_function(), &density, a))
            .collect::<Result<Vec<_>>>()?;
        let table = SetFunction::from_values(ring, dim, base.table.slack().clone(), values)?;
        Ok(Submeasure {
            rule: Rule::ChoquetDerived {
                base: Box::new(base),
                density,
            },
            table,
        })
    }

    pub fn evaluate(&self, a: &FiniteSet) -> Result<LatticeValue> {
        self.table.value(a).cloned()
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn domain(&self) -> &Ring {
        self.table.domain()
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn as_set_function(&self) -> &SetFunction {
        &self.table
    }
}

impl AsRef<SetFunction> for Submeasure {
    fn as_ref(&self) -> &SetFunction {
        &self.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio, to_f64};

    fn set(n: usize, pts: &[usize]) -> FiniteSet {
        FiniteSet::from_points(n, pts.iter().copied()).unwrap()
    }

    #[test]
    fn additive_evaluate() {
        let mu = Submeasure::additive(
            Ring::power_set(2).unwrap(),
            vec![LatticeValue::from_ints(&[1, 0]), LatticeValue::from_ints(&[0, 1])],
        )
        .unwrap();
        assert_eq!(mu.evaluate(&set(2, &[0, 1])).unwrap(), LatticeValue::from_ints(&[1, 1]));
        assert_eq!(mu.evaluate(&set(2, &[])).unwrap(), LatticeValue::zero(2));
    }

    #[test]
    fn distorted_sqrt_evaluate() {
        let mu = Submeasure::distorted(
            Ring::power_set(3).unwrap(),
            vec![int(1), int(1), int(1)],
            DistortionId::Sqrt,
            vec![int(1)],
        )
        .unwrap();
        let v = mu.evaluate(&set(3, &[0, 1])).unwrap();
        let x = to_f64(&v.components().unwrap()[0]);
        assert!((x - 2f64.sqrt()).abs() < 1e-15);
        assert!(!mu.as_set_function().is_exact());
        assert_eq!(mu.evaluate(&set(3, &[])).unwrap(), LatticeValue::zero(1));
        // |{0}| = 1 is a perfect square
        assert_eq!(mu.evaluate(&set(3, &[2])).unwrap(), LatticeValue::from_ints(&[1]));
    }

    #[test]
    fn set_outside_ring() {
        let ring = Ring::from_atoms(2, &[set(2, &[0, 1])]).unwrap();
        let mu = Submeasure::zero(ring, 1).unwrap();
        assert_eq!(mu.evaluate(&set(2, &[0])), Err(Error::SetOutsideRing(set(2, &[0]))));
        assert!(Error::SetOutsideRing(set(2, &[0])).to_string().contains("set outside ring"));
    }

    #[test]
    fn table_must_cover_ring() {
        let ring = Ring::power_set(1).unwrap();
        let mut entries = BTreeMap::new();
        entries.insert(set(1, &[0]), LatticeValue::from_ints(&[1]));
        assert!(Submeasure::table(ring.clone(), 1, entries.clone()).is_err());
        entries.insert(set(1, &[]), LatticeValue::from_ints(&[0]));
        assert!(Submeasure::table(ring, 1, entries).is_ok());
    }

    #[test]
    fn zero_measure_is_zero() {
        let mu = Submeasure::zero(Ring::power_set(3).unwrap(), 2).unwrap();
        assert!(mu.as_set_function().entries().all(|(_, v)| v.is_zero()));
        let _ = ratio(1, 2);
    }
}
