//! The FN-topology generated by a submeasure, through its neighborhood base
//! `U_ε = {A : ‖μ(A)‖ ≤ ε}` at ∅, the pseudometric `ρ(A, B) = ‖μ(A Δ B)‖`,
//! and exact closures of set classes.

use num::traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{format_scalar, int, ratio, ExtRational, Scalar};
use crate::report::{ModulusEntry, PropertyReport, Witness};
use crate::setring::{ClassOp, FiniteSet, Ring, SetClass};
use crate::submeasure::{classify, usc_modulus, verdict_grid, SetFunction, SubmeasureClass};

/// `{A ∈ domain : ‖μ(A)‖ ≤ ε}`.
pub fn u_epsilon<M: AsRef<SetFunction> + ?Sized>(mu: &M, eps: &Scalar) -> SetClass {
    let mu = mu.as_ref();
    let bound = ExtRational::Finite(eps.clone());
    let sets = mu
        .norms()
        .filter(|(_, n)| !mu.exceeds(n, &bound))
        .map(|(s, _)| *s);
    SetClass::new(mu.domain().universe_size(), sets).expect("domain sets share the universe")
}

/// The sublevel classes of a submeasure over a grid of ε, smallest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborhoodBase {
    pub source: SetFunction,
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Level {
    #[serde(serialize_with = "crate::numeric::serialize_scalar")]
    pub epsilon: Scalar,
    pub class: SetClass,
}

impl NeighborhoodBase {
    pub fn new<M: AsRef<SetFunction> + ?Sized>(mu: &M, grid: &[Scalar]) -> Self {
        let mu = mu.as_ref();
        let mut eps: Vec<Scalar> = grid.iter().filter(|e| **e >= Scalar::zero()).cloned().collect();
        eps.sort();
        eps.dedup();
        NeighborhoodBase {
            source: mu.clone(),
            levels: eps
                .into_iter()
                .map(|e| Level {
                    class: u_epsilon(mu, &e),
                    epsilon: e,
                })
                .collect(),
        }
    }

    /// First pair of levels with `ε₁ ≤ ε₂` but `U_{ε₁} ⊄ U_{ε₂}`.
    pub fn nesting_violation(&self) -> Option<(Scalar, Scalar)> {
        self.levels
            .windows(2)
            .find(|w| !w[0].class.is_subclass_of(&w[1].class))
            .map(|w| (w[0].epsilon.clone(), w[1].epsilon.clone()))
    }

    /// First level that is not normal in the domain, with the offending pair.
    pub fn normality_violation(&self) -> Option<(Scalar, FiniteSet, FiniteSet)> {
        self.levels.iter().find_map(|l| {
            normality_witness(self.source.domain(), &l.class).map(|(a, b)| (l.epsilon.clone(), a, b))
        })
    }
}

/// `(A, B)` with `A ∈ class`, `B ∈ ring`, `B ⊂ A` and `B ∉ class`.
fn normality_witness(ring: &Ring, class: &SetClass) -> Option<(FiniteSet, FiniteSet)> {
    class
        .iter()
        .find_map(|a| ring.class().subsets_of(a).find(|b| !class.contains(b)).map(|b| (*a, *b)))
}

/// Which of the five base conditions fails for `U_δ` against `U_ε`, with the
/// sets exhibiting it.
fn axiom_failure(mu: &SetFunction, small: &SetClass, big: &SetClass) -> Option<(u8, Vec<FiniteSet>)> {
    let pairwise = |op: ClassOp| {
        small.iter().find_map(|a| {
            small
                .iter()
                .find(|b| !big.contains(&op.apply(a, b)))
                .map(|b| vec![*a, *b, op.apply(a, b)])
        })
    };
    if let Some(w) = pairwise(ClassOp::SymmetricDifference) {
        return Some((1, w));
    }
    if let Some(w) = pairwise(ClassOp::Intersection) {
        return Some((2, w));
    }
    for a in mu.domain().iter() {
        if let Some(b) = small.iter().find(|b| !big.contains(&a.intersection(b))) {
            return Some((3, vec![*a, *b, a.intersection(b)]));
        }
    }
    if let Some((a, b)) = normality_witness(mu.domain(), big) {
        return Some((4, vec![a, b]));
    }
    pairwise(ClassOp::Union).map(|w| (5, w))
}

/// For each ε of the grid finds the largest δ ≤ ε for which `U_δ` satisfies
/// (1) `U_δ Δ̊ U_δ ⊆ U_ε`, (2) `U_δ ∩̊ U_δ ⊆ U_ε`, (3) `A ∩̊ U_δ ⊆ U_ε` for
/// every `A`, (5) `U_δ ∪̊ U_δ ⊆ U_ε`, and checks (4) `U_ε` is normal.
///
/// Only the values of δ at which `U_δ` changes are tried: ε, the norms below
/// ε, and one value below the smallest positive norm. The δ derived from the
/// uniform (s.c.) modulus, `½·min(ε/2, δ_u(ε/2))`, is checked as well.
/// Vacuous unless μ is order bounded and D_u.
pub fn check_filterbase_axioms<M: AsRef<SetFunction> + ?Sized>(mu: &M, grid: &[Scalar]) -> PropertyReport {
    const NAME: &str = "filterbase_axioms";
    let mu = mu.as_ref();
    if !mu.is_order_bounded() {
        return PropertyReport::vacuous(NAME, "requires an order bounded submeasure");
    }
    let class = classify(mu).class;
    if class < SubmeasureClass::Du {
        return PropertyReport::vacuous(NAME, format!("requires a D_u-submeasure, classified {class}"));
    }
    let floor = mu.slack() * int(4);
    let positive: Vec<Scalar> = mu
        .norms()
        .filter_map(|(_, n)| n.finite().cloned())
        .filter(|n| *n > floor)
        .collect();
    let tiny = positive.iter().min().map(|m| m * ratio(1, 2)).unwrap_or_else(|| ratio(1, 2));

    let grid: Vec<Scalar> = if grid.is_empty() {
        verdict_grid(mu, &[])
    } else {
        grid.to_vec()
    };
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for eps in grid.iter().filter(|e| **e > Scalar::zero()) {
        let big = u_epsilon(mu, eps);
        let mut candidates: Vec<Scalar> = positive.iter().filter(|n| *n < eps).cloned().collect();
        candidates.push(eps.clone());
        candidates.push(tiny.clone().min(eps.clone()));
        candidates.sort();
        candidates.dedup();
        let found = candidates
            .iter()
            .rev()
            .find(|d| axiom_failure(mu, &u_epsilon(mu, d), &big).is_none());
        let Some(delta) = found else {
            let (axiom, sets) = axiom_failure(mu, &u_epsilon(mu, &candidates[0]), &big).expect("failure");
            let values = sets.iter().map(|s| mu.v(s).clone()).collect();
            return PropertyReport::fails(
                NAME,
                Witness::new(
                    sets,
                    values,
                    format!("axiom ({axiom}) fails for every delta at epsilon = {}", format_scalar(eps)),
                ),
            )
            .with_moduli(rows);
        };
        let half = eps * ratio(1, 2);
        let from_usc = match usc_modulus(mu, &half).delta {
            ExtRational::Finite(d) => (d.min(half.clone())) * ratio(1, 2),
            ExtRational::Infinite => half * ratio(1, 2),
        };
        if from_usc.is_zero() || axiom_failure(mu, &u_epsilon(mu, &from_usc), &big).is_some() {
            notes.push(format!(
                "usc-derived delta {} does not satisfy the axioms at epsilon = {}",
                format_scalar(&from_usc),
                format_scalar(eps)
            ));
        }
        rows.push(ModulusEntry {
            epsilon: eps.clone(),
            delta: ExtRational::Finite(delta.clone()),
        });
    }
    let mut report = PropertyReport::holds(NAME).with_moduli(rows);
    if notes.is_empty() {
        report = report.with_note("usc-derived delta satisfies all axioms at every epsilon");
    }
    for n in notes {
        report = report.with_note(n);
    }
    report.with_note("continuity of the ring operations reduces to axioms (1)-(5) on the neighborhood base")
}

/// `ρ(A, B) = ‖μ(A Δ B)‖`.
pub fn rho<M: AsRef<SetFunction> + ?Sized>(mu: &M, a: &FiniteSet, b: &FiniteSet) -> Result<ExtRational> {
    mu.as_ref().norm(&a.symmetric_difference(b)).cloned()
}

/// `ρ(A, C) ≤ ρ(A, B) + ρ(B, C)` over all triples of the domain.
pub fn check_rho_triangle<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> PropertyReport {
    let mu = mu.as_ref();
    let sets = mu.domain().sets();
    for a in sets {
        for b in sets {
            for c in sets {
                let ab = mu.n(&a.symmetric_difference(b));
                let bc = mu.n(&b.symmetric_difference(c));
                let ac = mu.n(&a.symmetric_difference(c));
                if mu.exceeds(ac, &(ab + bc)) {
                    return PropertyReport::fails(
                        "rho_triangle",
                        Witness::new(vec![*a, *b, *c], Vec::new(), format!("rho(A,C) = {ac} > {ab} + {bc}")),
                    );
                }
            }
        }
    }
    PropertyReport::holds("rho_triangle")
}

/// `{A ∈ ambient : min_{E ∈ subclass} ‖μ(A Δ E)‖ = 0}`.
pub fn closure(subclass: &SetClass, ambient: &SetClass, mu: &SetFunction) -> Result<SetClass> {
    if !ambient.is_delta_closed() {
        return Err(Error::Hypothesis("ambient class is not closed under symmetric difference".into()));
    }
    if let Some(s) = subclass.iter().find(|s| !ambient.contains(s)) {
        return Err(Error::Hypothesis(format!("{s} is in the subclass but not in the ambient class")));
    }
    if let Some(s) = ambient.iter().find(|s| !mu.domain().contains(s)) {
        return Err(Error::SetOutsideRing(*s));
    }
    let zero = ExtRational::zero();
    let members: Vec<FiniteSet> = ambient
        .sets()
        .par_iter()
        .filter(|a| {
            subclass
                .iter()
                .any(|e| !mu.exceeds(mu.n(&a.symmetric_difference(e)), &zero))
        })
        .copied()
        .collect();
    SetClass::new(ambient.universe_size(), members)
}

/// The closure of a subring in the ambient class is a ring.
pub fn check_subring_closure(subring: &Ring, ambient: &SetClass, mu: &SetFunction) -> PropertyReport {
    const NAME: &str = "subring_closure";
    match closure(subring.class(), ambient, mu) {
        Err(e) => PropertyReport::vacuous(NAME, e.to_string()),
        Ok(c) => match c.ring_violation() {
            None => PropertyReport::holds(NAME).with_note(format!("closure = {c}")),
            Some(v) => PropertyReport::fails(NAME, Witness::new(c.sets().to_vec(), Vec::new(), v)),
        },
    }
}

/// `R` is dense in `(S, Γ(μ))`: the closure of `R` in `S` is all of `S`.
/// Vacuous unless `S` is a ring on which μ is an order bounded D_u-submeasure.
pub fn check_density(r: &Ring, s: &SetClass, mu: &SetFunction) -> PropertyReport {
    const NAME: &str = "density";
    let s_ring = match Ring::from_class(s.clone()) {
        Ok(x) => x,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let on_s = match mu.restrict(&s_ring) {
        Ok(x) => x,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    if !on_s.is_order_bounded() {
        return PropertyReport::vacuous(NAME, "requires an order bounded submeasure");
    }
    let class = classify(&on_s).class;
    if class < SubmeasureClass::Du {
        return PropertyReport::vacuous(NAME, format!("requires a D_u-submeasure, classified {class}"));
    }
    let c = match closure(r.class(), s, &on_s) {
        Ok(c) => c,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let mut report = match s.iter().find(|a| !c.contains(a)) {
        None => PropertyReport::holds(NAME),
        Some(a) => PropertyReport::fails(
            NAME,
            Witness::new(vec![*a], vec![on_s.v(a).clone()], "no member of R lies at distance 0"),
        ),
    };
    if r.class() == s {
        report = report.with_note("finite universe: the generated sigma-ring equals R, so density is immediate");
    }
    report
}
