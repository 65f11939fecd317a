//! Verdict records produced by every checker.

use serde::Serialize;

use crate::lattice::LatticeValue;
use crate::numeric::{serialize_scalar, ExtRational, Scalar};
use crate::setring::FiniteSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Hypotheses of the property were not met; nothing was asserted.
    Vacuous,
}

/// Sets and values exhibiting a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sets: Vec<FiniteSet>,
    pub values: Vec<LatticeValue>,
    pub detail: String,
}

impl Witness {
    pub fn new(sets: Vec<FiniteSet>, values: Vec<LatticeValue>, detail: impl Into<String>) -> Self {
        Witness {
            sets,
            values,
            detail: detail.into(),
        }
    }
}

/// One row of an ε → δ table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulusEntry {
    #[serde(serialize_with = "serialize_scalar")]
    pub epsilon: Scalar,
    pub delta: ExtRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub moduli: Vec<ModulusEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn holds(property: impl Into<String>) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: Verdict::Holds,
            witness: None,
            moduli: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fails(property: impl Into<String>, witness: Witness) -> Self {
        PropertyReport {
            verdict: Verdict::Fails,
            witness: Some(witness),
            ..PropertyReport::holds(property)
        }
    }

    pub fn vacuous(property: impl Into<String>, reason: impl Into<String>) -> Self {
        PropertyReport {
            verdict: Verdict::Vacuous,
            notes: vec![reason.into()],
            ..PropertyReport::holds(property)
        }
    }

    /// `holds` unless a witness is given.
    pub fn from_witness(property: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => PropertyReport::fails(property, w),
            None => PropertyReport::holds(property),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_moduli(mut self, moduli: Vec<ModulusEntry>) -> Self {
        self.moduli = moduli;
        self
    }

    pub fn holds_verdict(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fails
    }
}
