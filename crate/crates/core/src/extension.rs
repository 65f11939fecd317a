//! Extension of an order bounded exhaustive D_u-submeasure from a ring to
//! the closure ring `R₀`, on finite models.
//!
//! On a finite universe every increasing sequence of ring members is
//! eventually constant, so `R_σ = R` and the generated σ-ring is `R` itself.
//! `R*` is the power set of the ring's largest member. The reports say so
//! whenever a check becomes immediate for that reason.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fntopology::closure;
use crate::lattice::{lattice_inf, lattice_sup, LatticeValue};
use crate::numeric::ExtRational;
use crate::report::{PropertyReport, Verdict, Witness};
use crate::setring::{hereditary_class, r_sigma, FiniteSet, Ring, SetClass};
use crate::submeasure::{
    check_exhaustive, check_monotone, classify, usc_modulus, verdict_grid, SetFunction, SubmeasureClass,
};

const FINITE_COLLAPSE: &str =
    "finite universe: increasing sequences of ring members stabilize, so R_sigma and the generated sigma-ring equal R";

/// `μ̂(A) = sup{μ(B) : B ⊆ A, B ∈ R}` for `A ∈ R_σ`.
pub fn mu_hat(mu: &SetFunction, a: &FiniteSet) -> Result<LatticeValue> {
    let r = r_sigma(mu.domain());
    if !r.contains(a) {
        return Err(Error::SetOutsideRing(*a));
    }
    let family: Vec<LatticeValue> = mu.domain().class().subsets_of(a).map(|b| mu.v(b).clone()).collect();
    lattice_sup(&family)
}

/// `μ̂` tabulated on `R_σ`.
pub fn mu_hat_function(mu: &SetFunction) -> Result<SetFunction> {
    SetFunction::from_fn(r_sigma(mu.domain()), mu.dim(), mu.slack().clone(), |a| mu_hat(mu, a))
}

/// `μ*(A) = inf{μ̂(B) : A ⊆ B, B ∈ R_σ}` for `A ∈ R*`.
pub fn mu_star(mu: &SetFunction, a: &FiniteSet) -> Result<LatticeValue> {
    let r = r_sigma(mu.domain());
    let covers: Vec<LatticeValue> = r
        .class()
        .supersets_of(a)
        .map(|b| mu_hat(mu, b))
        .collect::<Result<_>>()?;
    if covers.is_empty() {
        return Err(Error::NoCover(*a));
    }
    lattice_inf(&covers)
}

/// `μ*` tabulated on `R*`.
pub fn mu_star_function(mu: &SetFunction) -> Result<SetFunction> {
    let r_star = hereditary_class(mu.domain());
    let values = r_star
        .sets()
        .par_iter()
        .map(|a| mu_star(mu, a))
        .collect::<Result<Vec<_>>>()?;
    SetFunction::from_values(r_star, mu.dim(), mu.slack().clone(), values)
}

/// The standing hypotheses: order bounded, exhaustive, D_u.
pub fn check_hypotheses(mu: &SetFunction) -> Result<()> {
    if !mu.is_order_bounded() {
        return Err(Error::Hypothesis("order bounded".into()));
    }
    if !check_exhaustive(mu).holds_verdict() {
        return Err(Error::Hypothesis("exhaustive".into()));
    }
    let class = classify(mu).class;
    if class < SubmeasureClass::Du {
        return Err(Error::Hypothesis(format!("D_u-submeasure (classified {class})")));
    }
    Ok(())
}

/// `R₀`, the closure of `R` in `R*` under the μ*-pseudometric.
pub fn r_zero(mu: &SetFunction) -> Result<SetClass> {
    check_hypotheses(mu)?;
    let star = mu_star_function(mu)?;
    closure(mu.domain().class(), star.domain().class(), &star)
}

fn lattice_null(v: &LatticeValue) -> bool {
    v.is_zero()
}

fn norm_null(mu: &SetFunction, n: &ExtRational) -> bool {
    !mu.exceeds(n, &ExtRational::zero())
}

fn item(name: &str, failure: Option<Witness>, note: &str) -> PropertyReport {
    PropertyReport::from_witness(name, failure).with_note(note)
}

/// Collapses item reports into one: fails on the first failing item, and
/// lists every item verdict in the notes.
fn bundle(name: &str, items: Vec<PropertyReport>) -> PropertyReport {
    let failed = items.iter().find(|r| r.failed()).and_then(|r| r.witness.clone());
    let mut report = PropertyReport::from_witness(name, failed);
    for r in &items {
        let verdict = match r.verdict {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Vacuous => "vacuous",
        };
        report = report.with_note(format!("{}: {verdict}; {}", r.property, r.notes.join("; ")));
    }
    report
}

fn gate(name: &str, mu: &SetFunction) -> Option<PropertyReport> {
    check_hypotheses(mu).err().map(|e| PropertyReport::vacuous(name, e.to_string()))
}

/// Properties of `μ̂` on `R_σ`: it restricts to μ and is monotone,
/// exhaustive, continuous along increasing limits, (u.s.c.) and continuous.
pub fn inner_extension_items(mu: &SetFunction) -> Result<Vec<PropertyReport>> {
    let hat = mu_hat_function(mu)?;
    let restriction = mu
        .entries()
        .find(|(a, v)| hat.v(a) != *v)
        .map(|(a, v)| Witness::new(vec![*a], vec![v.clone(), hat.v(a).clone()], "mu_hat differs from mu on R"));
    let monotone = check_monotone(&hat);
    let restriction = match (restriction, monotone.witness) {
        (Some(w), _) | (None, Some(w)) => Some(w),
        (None, None) => None,
    };
    let empty = hat.domain().empty_set();
    let null_empty = |what: &str| {
        (!norm_null(&hat, hat.n(&empty)))
            .then(|| Witness::new(vec![empty], vec![hat.v(&empty).clone()], format!("norm(mu_hat(empty)) > 0 breaks {what}")))
    };
    let usc_failure = verdict_grid(&hat, &[]).into_iter().find_map(|eps| {
        let m = usc_modulus(&hat, &eps);
        (!m.is_positive()).then(|| {
            let values = m.witness.iter().map(|s| hat.v(s).clone()).collect();
            Witness::new(m.witness, values, format!("usc modulus is 0 at epsilon = {eps}"))
        })
    });
    Ok(vec![
        item("restriction_and_monotone", restriction, "mu_hat agrees with mu on R and is monotone"),
        item(
            "exhaustive",
            null_empty("exhaustivity"),
            "disjoint sequences in R_sigma are eventually empty, so exhaustivity reduces to norm(mu_hat(empty)) = 0",
        ),
        item(
            "increasing_limits",
            null_empty("continuity along increasing limits"),
            "A_n increasing to A stabilizes, so norm(mu_hat(A \\ A_n)) is eventually norm(mu_hat(empty)); the limit statement is exercised by the dyadic model",
        ),
        item("usc", usc_failure, "uniform modulus positive at every epsilon of the verdict grid"),
        item(
            "continuity",
            null_empty("continuity"),
            "sequences decreasing to the empty set stabilize, so continuity reduces to norm(mu_hat(empty)) = 0",
        ),
    ])
}

/// Bundled report over [`inner_extension_items`]; vacuous if the standing
/// hypotheses fail.
pub fn verify_inner_extension(mu: &SetFunction) -> PropertyReport {
    const NAME: &str = "inner_extension";
    if let Some(r) = gate(NAME, mu) {
        return r;
    }
    match inner_extension_items(mu) {
        Ok(items) => bundle(NAME, items).with_note(FINITE_COLLAPSE),
        Err(e) => PropertyReport::vacuous(NAME, e.to_string()),
    }
}

/// For each `A ∈ R₀`, the smallest `C ∈ R_σ` with `A ⊆ C` and
/// `μ*(C ∖ A)` of norm 0.
pub fn outer_null_cover(star: &SetFunction, r: &Ring, a: &FiniteSet) -> Option<FiniteSet> {
    r.class()
        .supersets_of(a)
        .filter(|c| norm_null(star, star.n(&c.difference(a))))
        .min_by_key(|c| c.len())
        .copied()
}

/// The closure ring: membership by a zero-distance approximant in `R_σ`,
/// agreement with the closure of `R`, outer null covers, and continuity of
/// μ* on `R₀`.
pub fn closure_ring_items(mu: &SetFunction) -> Result<Vec<PropertyReport>> {
    let star = mu_star_function(mu)?;
    let r = r_sigma(mu.domain());
    let r0 = r_zero(mu)?;

    let via_approximants: Vec<FiniteSet> = star
        .domain()
        .iter()
        .filter(|a| r.iter().any(|e| norm_null(&star, star.n(&a.symmetric_difference(e)))))
        .copied()
        .collect();
    let approx_failure = (via_approximants.as_slice() != r0.sets()).then(|| {
        Witness::new(via_approximants.clone(), Vec::new(), "approximant characterization differs from the closure")
    });

    let ring_failure = r0
        .ring_violation()
        .or_else(|| (!mu.domain().class().is_subclass_of(&r0)).then(|| "R is not contained in R0".to_string()))
        .map(|v| Witness::new(r0.sets().to_vec(), Vec::new(), v));

    let mut covers = Vec::new();
    let mut cover_failure = None;
    for a in r0.iter() {
        match outer_null_cover(&star, &r, a) {
            Some(c) => covers.push(format!("{a} in {c}")),
            None => {
                cover_failure = Some(Witness::new(vec![*a], vec![star.v(a).clone()], "no outer cover with null difference"));
                break;
            }
        }
    }

    let empty = star.domain().empty_set();
    let continuity_failure = (!norm_null(&star, star.n(&empty)))
        .then(|| Witness::new(vec![empty], vec![star.v(&empty).clone()], "norm(mu_star(empty)) > 0"));

    Ok(vec![
        item(
            "approximant_membership",
            approx_failure,
            "A is in R0 iff some E in R_sigma has norm(mu_star(A delta E)) = 0",
        ),
        item("closure_is_ring", ring_failure, &format!("R0 = closure of R = {r0}")),
        item("outer_null_cover", cover_failure, &format!("covers: {}", covers.join(", "))),
        item(
            "continuity_on_r0",
            continuity_failure,
            "sequences in R0 decreasing to the empty set stabilize, so continuity reduces to norm(mu_star(empty)) = 0",
        ),
    ])
}

pub fn verify_closure_ring(mu: &SetFunction) -> PropertyReport {
    const NAME: &str = "closure_ring";
    if let Some(r) = gate(NAME, mu) {
        return r;
    }
    match closure_ring_items(mu) {
        Ok(items) => bundle(NAME, items).with_note(FINITE_COLLAPSE),
        Err(e) => PropertyReport::vacuous(NAME, e.to_string()),
    }
}

/// `B, C ∈ σ(R)` with `B ⊆ A ⊆ C` and `μ*(C ∖ B) = 0`, taking the largest
/// `B` and the smallest `C`.
pub fn null_completion_witnesses(mu: &SetFunction, a: &FiniteSet) -> Result<(FiniteSet, FiniteSet)> {
    let r0 = r_zero(mu)?;
    if !r0.contains(a) {
        return Err(Error::Hypothesis(format!("{a} is not a member of R0")));
    }
    let star = mu_star_function(mu)?;
    let sigma = r_sigma(mu.domain());
    let mut best: Option<(FiniteSet, FiniteSet)> = None;
    for b in sigma.class().subsets_of(a) {
        for c in sigma.class().supersets_of(a) {
            if !lattice_null(star.v(&c.difference(b))) {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b0, c0)) => (b.len(), std::cmp::Reverse(c.len())) > (b0.len(), std::cmp::Reverse(c0.len())),
            };
            if better {
                best = Some((*b, *c));
            }
        }
    }
    best.ok_or(Error::NullCompletionViolated(*a))
}

/// Every subset of a μ*-null member of `R₀` is a μ*-null member of `R₀`.
pub fn verify_null_completeness(mu: &SetFunction) -> PropertyReport {
    const NAME: &str = "null_completeness";
    if let Some(r) = gate(NAME, mu) {
        return r;
    }
    let (star, r0) = match mu_star_function(mu).and_then(|s| r_zero(mu).map(|r| (s, r))) {
        Ok(x) => x,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let nulls: Vec<&FiniteSet> = r0.iter().filter(|a| lattice_null(star.v(a))).collect();
    for a in &nulls {
        for b in a.subsets() {
            if !r0.contains(&b) || !lattice_null(star.v(&b)) {
                return PropertyReport::fails(
                    NAME,
                    Witness::new(vec![**a, b], vec![star.v(a).clone(), star.v(&b).clone()], "subset of a null set is not a null member of R0"),
                );
            }
        }
    }
    PropertyReport::holds(NAME).with_note(format!(
        "{} null members of R0, all subsets checked",
        nulls.len()
    ))
}

/// `R₀` is a null-completion of `σ(R)`: every member has witnesses.
pub fn verify_null_completion(mu: &SetFunction) -> PropertyReport {
    const NAME: &str = "null_completion";
    if let Some(r) = gate(NAME, mu) {
        return r;
    }
    let r0 = match r_zero(mu) {
        Ok(r) => r,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let mut listed = Vec::new();
    for a in r0.iter() {
        match null_completion_witnesses(mu, a) {
            Ok((b, c)) => listed.push(format!("{b} ⊆ {a} ⊆ {c}")),
            Err(_) => {
                return PropertyReport::fails(NAME, Witness::new(vec![*a], Vec::new(), "no null-completion witnesses"))
            }
        }
    }
    PropertyReport::holds(NAME)
        .with_note(format!("witnesses: {}", listed.join(", ")))
        .with_note(FINITE_COLLAPSE)
}

/// `A ↦ sup{μ(B) : B ⊆ A, B ∈ R}` on `R₀`, an extension built from inside
/// rather than from covers.
pub fn inner_extension(mu: &SetFunction) -> Result<SetFunction> {
    let r0 = Ring::from_class(r_zero(mu)?)?;
    SetFunction::from_fn(r0, mu.dim(), mu.slack().clone(), |a| {
        let family: Vec<LatticeValue> = mu.domain().class().subsets_of(a).map(|b| mu.v(b).clone()).collect();
        lattice_sup(&family)
    })
}

/// `‖ν(A)‖ = ‖μ*(A)‖` on `R₀` for an alternative extension `ν`.
///
/// Only the given `ν` is tested, not every extension. Vacuous unless `ν` is
/// defined on `R₀`, restricts to μ on `R` and is D_u there.
pub fn verify_norm_uniqueness(mu: &SetFunction, alt: &SetFunction) -> PropertyReport {
    const NAME: &str = "norm_uniqueness";
    if let Some(r) = gate(NAME, mu) {
        return r;
    }
    let (star, r0) = match mu_star_function(mu).and_then(|s| r_zero(mu).map(|r| (s, r))) {
        Ok(x) => x,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let r0_ring = match Ring::from_class(r0.clone()) {
        Ok(r) => r,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let on_r0 = match alt.restrict(&r0_ring) {
        Ok(x) => x,
        Err(e) => return PropertyReport::vacuous(NAME, format!("alternative not defined on R0: {e}")),
    };
    if mu.entries().any(|(a, v)| on_r0.v(a) != v) {
        return PropertyReport::vacuous(NAME, "alternative does not restrict to mu on R");
    }
    let class = classify(&on_r0).class;
    if class < SubmeasureClass::Du {
        return PropertyReport::vacuous(NAME, format!("alternative is not a D_u-submeasure on R0 (classified {class})"));
    }
    for a in r0.iter() {
        if on_r0.differs(on_r0.n(a), star.n(a)) {
            return PropertyReport::fails(
                NAME,
                Witness::new(vec![*a], vec![on_r0.v(a).clone(), star.v(a).clone()], "norms of the alternative and mu_star differ"),
            );
        }
    }
    PropertyReport::holds(NAME).with_note(format!(
        "norms agree on all {} members of R0 for this alternative; other extensions are not covered",
        r0.len()
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NullWitness {
    pub set: FiniteSet,
    pub inner: FiniteSet,
    pub outer: FiniteSet,
}

/// Everything the extension pipeline computes for one submeasure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionResult {
    pub source: SetFunction,
    pub r_star: SetClass,
    pub mu_star: SetFunction,
    pub r_zero: SetClass,
    pub witnesses: Vec<NullWitness>,
    pub reports: Vec<PropertyReport>,
}

/// Runs the pipeline; fails with the unmet hypothesis if μ is not an order
/// bounded exhaustive D_u-submeasure.
pub fn extend(mu: &SetFunction) -> Result<ExtensionResult> {
    let r0 = r_zero(mu)?;
    let star = mu_star_function(mu)?;
    let witnesses = r0
        .iter()
        .map(|a| null_completion_witnesses(mu, a).map(|(b, c)| NullWitness { set: *a, inner: b, outer: c }))
        .collect::<Result<Vec<_>>>()?;
    let inner = inner_extension(mu)?;
    let reports = vec![
        verify_inner_extension(mu),
        verify_closure_ring(mu),
        verify_null_completeness(mu),
        verify_norm_uniqueness(mu, &inner),
        verify_null_completion(mu),
    ];
    Ok(ExtensionResult {
        source: mu.clone(),
        r_star: star.domain().class().clone(),
        mu_star: star,
        r_zero: r0,
        witnesses,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::Zero;
    use crate::numeric::{int, Scalar};
    use crate::submeasure::{DistortionId, Submeasure};

    fn set(n: usize, pts: &[usize]) -> FiniteSet {
        FiniteSet::from_points(n, pts.iter().copied()).unwrap()
    }

    fn worked() -> Submeasure {
        let ring = Ring::from_atoms(3, &[set(3, &[0]), set(3, &[1, 2])]).unwrap();
        Submeasure::additive(
            ring,
            vec![LatticeValue::from_ints(&[1]), LatticeValue::zero(1), LatticeValue::zero(1)],
        )
        .unwrap()
    }

    /// Literal sup/inf sweeps over every subset of the universe.
    fn oracle(mu: &SetFunction) -> Vec<(FiniteSet, Vec<Scalar>)> {
        let n = mu.domain().universe_size();
        let members: Vec<FiniteSet> = mu.domain().iter().copied().collect();
        let hat = |a: &FiniteSet| -> Vec<Scalar> {
            let mut out = vec![Scalar::zero(); mu.dim()];
            for b in members.iter().filter(|b| b.bits() & !a.bits() == 0) {
                for (o, c) in out.iter_mut().zip(mu.value(b).unwrap().components().unwrap()) {
                    if c > o {
                        *o = c.clone();
                    }
                }
            }
            out
        };
        let mut rows = Vec::new();
        for bits in 0..(1u64 << n) {
            let a = FiniteSet::from_bits(n, bits).unwrap();
            let covers: Vec<&FiniteSet> = members.iter().filter(|c| bits & !c.bits() == 0).collect();
            if covers.is_empty() {
                continue;
            }
            let mut out: Option<Vec<Scalar>> = None;
            for c in covers {
                let h = hat(c);
                out = Some(match out {
                    None => h,
                    Some(o) => o.into_iter().zip(h).map(|(x, y)| if y < x { y } else { x }).collect(),
                });
            }
            rows.push((a, out.unwrap()));
        }
        rows
    }

    #[test]
    fn worked_example_values() {
        let mu = worked();
        let f = mu.as_set_function();
        assert_eq!(mu_hat(f, &set(3, &[1, 2])).unwrap(), LatticeValue::zero(1));
        assert_eq!(mu_star(f, &set(3, &[1])).unwrap(), LatticeValue::zero(1));
        assert_eq!(mu_star(f, &set(3, &[0, 1])).unwrap(), LatticeValue::from_ints(&[1]));
        for a in f.domain().iter() {
            assert_eq!(&mu_star(f, a).unwrap(), f.v(a));
            assert_eq!(&mu_hat(f, a).unwrap(), f.v(a));
        }
        assert_eq!(r_zero(f).unwrap(), SetClass::power_set(3).unwrap());
    }

    #[test]
    fn worked_example_matches_oracle() {
        let mu = worked();
        let star = mu_star_function(mu.as_set_function()).unwrap();
        let rows = oracle(mu.as_set_function());
        assert_eq!(rows.len(), 8);
        for (a, v) in rows {
            assert_eq!(star.value(&a).unwrap(), &LatticeValue::vector(v).unwrap(), "{a}");
        }
    }

    #[test]
    fn oracle_agrees_on_sample_instances() {
        for ring in crate::setring::enumerate_subrings(3).unwrap() {
            let mu = Submeasure::distorted(ring, vec![int(2), int(0), int(1)], DistortionId::Cap2x, vec![int(1), int(3)]).unwrap();
            let star = mu_star_function(mu.as_set_function()).unwrap();
            for (a, v) in oracle(mu.as_set_function()) {
                assert_eq!(star.value(&a).unwrap(), &LatticeValue::vector(v).unwrap());
            }
        }
    }

    #[test]
    fn errors() {
        let mu = worked();
        let f = mu.as_set_function();
        assert_eq!(mu_hat(f, &set(3, &[1])), Err(Error::SetOutsideRing(set(3, &[1]))));
        let small = Submeasure::zero(Ring::from_atoms(3, &[set(3, &[0])]).unwrap(), 1).unwrap();
        assert_eq!(mu_star(small.as_set_function(), &set(3, &[1])), Err(Error::NoCover(set(3, &[1]))));
        let bad = Submeasure::table_from_fn(Ring::power_set(1).unwrap(), 1, |_| LatticeValue::from_ints(&[1])).unwrap();
        let e = r_zero(bad.as_set_function()).unwrap_err();
        assert!(e.to_string().starts_with("hypothesis not met"));
        let r = verify_inner_extension(bad.as_set_function());
        assert_eq!(r.verdict, Verdict::Vacuous);
    }

    #[test]
    fn r_zero_for_positive_measures() {
        let full = Submeasure::additive(
            Ring::power_set(3).unwrap(),
            (1..=3).map(|w| LatticeValue::from_ints(&[w])).collect(),
        )
        .unwrap();
        assert_eq!(r_zero(full.as_set_function()).unwrap(), SetClass::power_set(3).unwrap());
        let ring = Ring::from_atoms(3, &[set(3, &[0]), set(3, &[1, 2])]).unwrap();
        let sub = Submeasure::additive(ring.clone(), (1..=3).map(|w| LatticeValue::from_ints(&[w])).collect()).unwrap();
        assert_eq!(&r_zero(sub.as_set_function()).unwrap(), ring.class());
    }

    #[test]
    fn inner_extension_and_closure_reports() {
        let mu = worked();
        let r = verify_inner_extension(mu.as_set_function());
        assert!(r.holds_verdict(), "{r:?}");
        assert_eq!(r.notes.len(), 6);
        let r = verify_closure_ring(mu.as_set_function());
        assert!(r.holds_verdict(), "{r:?}");
        assert!(r.notes.iter().any(|n| n.contains("{1} in {1,2}")));
        let zero = Submeasure::zero(Ring::power_set(2).unwrap(), 2).unwrap();
        assert!(verify_inner_extension(zero.as_set_function()).holds_verdict());
        assert!(verify_closure_ring(zero.as_set_function()).holds_verdict());
    }

    #[test]
    fn outer_covers() {
        let mu = worked();
        let star = mu_star_function(mu.as_set_function()).unwrap();
        let r = mu.domain().clone();
        assert_eq!(outer_null_cover(&star, &r, &set(3, &[1])), Some(set(3, &[1, 2])));
        assert_eq!(outer_null_cover(&star, &r, &set(3, &[0])), Some(set(3, &[0])));
        let positive = Submeasure::additive(Ring::power_set(2).unwrap(), vec![LatticeValue::from_ints(&[1]); 2]).unwrap();
        let pstar = mu_star_function(positive.as_set_function()).unwrap();
        for a in positive.domain().iter() {
            assert_eq!(outer_null_cover(&pstar, positive.domain(), a), Some(*a));
        }
    }

    #[test]
    fn witness_examples() {
        let mu = worked();
        let f = mu.as_set_function();
        assert_eq!(null_completion_witnesses(f, &set(3, &[1])).unwrap(), (set(3, &[]), set(3, &[1, 2])));
        assert_eq!(null_completion_witnesses(f, &set(3, &[0, 2])).unwrap(), (set(3, &[0]), set(3, &[0, 1, 2])));
        for a in f.domain().iter() {
            assert_eq!(null_completion_witnesses(f, a).unwrap(), (*a, *a));
        }
        for a in SetClass::power_set(3).unwrap().iter() {
            let (b, c) = null_completion_witnesses(f, a).unwrap();
            assert!(b.is_subset(a) && a.is_subset(&c));
            assert!(mu_star(f, &c.difference(&b)).unwrap().is_zero());
        }
    }

    #[test]
    fn null_completeness_cases() {
        let mu = worked();
        let r = verify_null_completeness(mu.as_set_function());
        assert!(r.holds_verdict());
        assert!(r.notes[0].starts_with("4 null members"));
        let positive = Submeasure::additive(Ring::power_set(2).unwrap(), vec![LatticeValue::from_ints(&[1]); 2]).unwrap();
        let r = verify_null_completeness(positive.as_set_function());
        assert!(r.notes[0].starts_with("1 null members"));
        let zero = Submeasure::zero(Ring::from_atoms(3, &[set(3, &[0, 1])]).unwrap(), 1).unwrap();
        assert!(verify_null_completeness(zero.as_set_function()).holds_verdict());
        assert_eq!(r_zero(zero.as_set_function()).unwrap().len(), 4);
        assert!(verify_null_completion(mu.as_set_function()).holds_verdict());
    }

    #[test]
    fn norm_uniqueness_cases() {
        let mu = worked();
        let f = mu.as_set_function();
        let inner = inner_extension(f).unwrap();
        let r = verify_norm_uniqueness(f, &inner);
        assert!(r.holds_verdict(), "{r:?}");
        assert!(r.notes[0].contains("all 8 members"));
        let star = mu_star_function(f).unwrap();
        assert!(verify_norm_uniqueness(f, &star).holds_verdict());

        // a table extension that is not D_u: a null set added to {0} jumps the value
        let bad = SetFunction::from_fn(Ring::power_set(3).unwrap(), 1, Scalar::zero(), |a| {
            Ok(LatticeValue::from_ints(&[match a.bits() {
                0b000 | 0b010 | 0b100 | 0b110 => 0,
                0b001 | 0b111 => 1,
                _ => 5,
            }]))
        })
        .unwrap();
        assert_eq!(verify_norm_uniqueness(f, &bad).verdict, Verdict::Vacuous);
    }

    #[test]
    fn extend_pipeline() {
        let mu = worked();
        let res = extend(mu.as_set_function()).unwrap();
        assert_eq!(res.witnesses.len(), 8);
        assert!(res.reports.iter().all(PropertyReport::holds_verdict), "{:?}", res.reports);
        assert_eq!(res.r_star.len(), 8);
    }
}
