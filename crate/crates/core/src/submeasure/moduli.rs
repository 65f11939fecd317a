//! Moduli of subadditive continuity and of the pseudometric generating
//! property, the equivalent symmetric-difference formulations, and the
//! δ_k sequence with its chained union bound.
//!
//! Every modulus is "the largest δ": the minimum over violating sets of the
//! quantity that must stay below δ. Because the hypotheses are strict
//! (`‖μ(B)‖ < δ`), that minimum is itself admissible. A zero modulus means
//! the property fails at that ε and the minimizing violator is returned.

use std::collections::BTreeSet;

use num::traits::Zero;
use serde::Serialize;

use super::function::SetFunction;
use crate::error::{Error, Result};
use crate::numeric::{format_scalar, int, pow2_neg, ratio, serialize_scalar, ExtRational, Scalar};
use crate::report::{ModulusEntry, PropertyReport, Verdict, Witness};
use crate::setring::FiniteSet;

pub const DELTA_POLICY: &str =
    "delta_0 = 1/2; delta_{k+1} = (1/2) * min(2^-(k+1), delta_k, pgp_modulus(mu, delta_k))";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Modulus {
    #[serde(serialize_with = "serialize_scalar")]
    pub epsilon: Scalar,
    pub delta: ExtRational,
    /// The minimizing violator (sets depend on the modulus kind); empty when
    /// nothing violates and δ = +∞.
    pub witness: Vec<FiniteSet>,
}

impl Modulus {
    pub fn is_positive(&self) -> bool {
        !self.delta.is_zero()
    }

    fn entry(&self) -> ModulusEntry {
        ModulusEntry {
            epsilon: self.epsilon.clone(),
            delta: self.delta.clone(),
        }
    }
}

struct Best {
    delta: ExtRational,
    witness: Vec<FiniteSet>,
}

impl Best {
    fn new() -> Self {
        Best {
            delta: ExtRational::Infinite,
            witness: Vec::new(),
        }
    }

    fn offer(&mut self, value: &ExtRational, witness: impl FnOnce() -> Vec<FiniteSet>) {
        if *value < self.delta || (self.witness.is_empty() && *value == self.delta) {
            self.delta = value.clone();
            self.witness = witness();
        }
    }

    fn finish(self, epsilon: &Scalar) -> Modulus {
        Modulus {
            epsilon: epsilon.clone(),
            delta: self.delta,
            witness: self.witness,
        }
    }
}

/// `{2^{-j} : j = 0..10}`, largest first.
pub fn standard_grid() -> Vec<Scalar> {
    (0..=10).map(pow2_neg).collect()
}

/// The standard grid, any `extra` values, and two data-dependent values that
/// make grid verdicts exact on a finite ring: half the smallest positive
/// norm and half the smallest gap between distinct norms.
///
/// A null set violating (3a)/(3b) does so for every ε below the norm gap it
/// opens, and a null pair violating the p.g.p. does so for every ε up to the
/// norm of its union; both thresholds are bounded below by those values.
pub fn verdict_grid(mu: &SetFunction, extra: &[Scalar]) -> Vec<Scalar> {
    let floor = mu.slack() * int(4);
    let norms: BTreeSet<Scalar> = mu.norms().filter_map(|(_, n)| n.finite().cloned()).collect();
    let mut grid: BTreeSet<Scalar> = standard_grid().into_iter().collect();
    grid.extend(extra.iter().filter(|e| **e > Scalar::zero()).cloned());
    if let Some(min_pos) = norms.iter().find(|n| **n > floor) {
        grid.insert(min_pos * ratio(1, 2));
    }
    let sorted: Vec<&Scalar> = norms.iter().collect();
    let min_gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|g| *g > floor)
        .min();
    if let Some(g) = min_gap {
        grid.insert(g * ratio(1, 2));
    }
    grid.into_iter().rev().collect()
}

fn sc_violates(mu: &SetFunction, a: &FiniteSet, na: &ExtRational, b: &FiniteSet, eps: &Scalar) -> bool {
    // (3a) ‖μ(A ∪ B)‖ ≤ ‖μ(A)‖ + ε and (3b) ‖μ(A)‖ ≤ ‖μ(A ∖ B)‖ + ε
    mu.exceeds(mu.n(&a.union(b)), &na.plus(eps)) || mu.exceeds(na, &mu.n(&a.difference(b)).plus(eps))
}

/// δ(A, ε): the largest δ such that every `B` with `‖μ(B)‖ < δ` satisfies
/// (3a) and (3b) at `A`. The witness is `[B]`.
pub fn sc_modulus<M: AsRef<SetFunction> + ?Sized>(mu: &M, a: &FiniteSet, eps: &Scalar) -> Result<Modulus> {
    let mu = mu.as_ref();
    let na = mu.norm(a)?;
    let mut best = Best::new();
    for b in mu.domain().iter() {
        if sc_violates(mu, a, na, b, eps) {
            best.offer(mu.n(b), || vec![*b]);
        }
    }
    Ok(best.finish(eps))
}

/// δ(ε) = min over `A` of δ(A, ε). The witness is `[A, B]`.
pub fn usc_modulus<M: AsRef<SetFunction> + ?Sized>(mu: &M, eps: &Scalar) -> Modulus {
    let mu = mu.as_ref();
    let mut best = Best::new();
    for a in mu.domain().iter() {
        let m = sc_modulus(mu, a, eps).expect("domain member");
        best.offer(&m.delta, || std::iter::once(*a).chain(m.witness).collect());
    }
    best.finish(eps)
}

/// Largest δ with `‖μ(AΔC)‖ < δ ⇒ |‖μ(C)‖ − ‖μ(A)‖| ≤ ε` for all `C`.
fn sc_symmetric_modulus(mu: &SetFunction, a: &FiniteSet, eps: &Scalar) -> Modulus {
    let na = mu.n(a);
    let mut best = Best::new();
    for c in mu.domain().iter() {
        let nc = mu.n(c);
        if mu.exceeds(nc, &na.plus(eps)) || mu.exceeds(na, &nc.plus(eps)) {
            best.offer(mu.n(&a.symmetric_difference(c)), || vec![*c]);
        }
    }
    best.finish(eps)
}

/// Outcome of comparing two formulations of the same property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceCheck {
    pub via_modulus: Verdict,
    pub via_alternative: Verdict,
    /// `holds` exactly when the two formulations agree.
    pub report: PropertyReport,
}

fn equivalence_report(
    property: &str,
    modulus_failure: Option<(Scalar, Vec<FiniteSet>)>,
    alternative_failure: Option<(Scalar, Vec<FiniteSet>)>,
    moduli: Vec<ModulusEntry>,
    mu: &SetFunction,
) -> EquivalenceCheck {
    let verdict = |f: &Option<_>| if f.is_some() { Verdict::Fails } else { Verdict::Holds };
    let via_modulus = verdict(&modulus_failure);
    let via_alternative = verdict(&alternative_failure);
    let describe = |name: &str, f: &Option<(Scalar, Vec<FiniteSet>)>| match f {
        None => format!("{name}: holds on the verdict grid"),
        Some((eps, sets)) => format!(
            "{name}: fails at epsilon = {} with sets {:?}",
            format_scalar(eps),
            sets
        ),
    };
    let mut report = if via_modulus == via_alternative {
        PropertyReport::holds(property)
    } else {
        let (eps, sets) = modulus_failure
            .clone()
            .or_else(|| alternative_failure.clone())
            .expect("one formulation failed");
        let values = sets.iter().map(|s| mu.v(s).clone()).collect();
        PropertyReport::fails(
            property,
            Witness::new(
                sets,
                values,
                format!("formulations disagree at epsilon = {}", format_scalar(&eps)),
            ),
        )
    };
    report = report
        .with_moduli(moduli)
        .with_note(describe("modulus formulation", &modulus_failure))
        .with_note(describe("symmetric-difference formulation", &alternative_failure));
    EquivalenceCheck {
        via_modulus,
        via_alternative,
        report,
    }
}

/// Compares (s.c.) via δ(A, ε) with the formulation
/// `‖μ(AΔC)‖ < δ ⇒ ‖μ(C)‖ − ε ≤ ‖μ(A)‖ ≤ ‖μ(C)‖ + ε`, over the verdict grid.
pub fn check_sc_equivalence<M: AsRef<SetFunction> + ?Sized>(mu: &M, extra_grid: &[Scalar]) -> EquivalenceCheck {
    let mu = mu.as_ref();
    let mut modulus_failure = None;
    let mut alternative_failure = None;
    let mut moduli = Vec::new();
    for eps in verdict_grid(mu, extra_grid) {
        let mut min_delta = ExtRational::Infinite;
        for a in mu.domain().iter() {
            let m = sc_modulus(mu, a, &eps).expect("domain member");
            if !m.is_positive() && modulus_failure.is_none() {
                modulus_failure = Some((eps.clone(), std::iter::once(*a).chain(m.witness.clone()).collect()));
            }
            min_delta = min_delta.min(m.delta);
            let s = sc_symmetric_modulus(mu, a, &eps);
            if !s.is_positive() && alternative_failure.is_none() {
                alternative_failure = Some((eps.clone(), std::iter::once(*a).chain(s.witness).collect()));
            }
        }
        moduli.push(ModulusEntry {
            epsilon: eps,
            delta: min_delta,
        });
    }
    equivalence_report("sc_equivalence", modulus_failure, alternative_failure, moduli, mu)
}

/// Compares (u.s.c.) via δ(ε) with the pair formulation
/// `‖μ(AΔB)‖ < δ ⇒ |‖μ(A)‖ − ‖μ(B)‖| ≤ ε`, over the verdict grid.
pub fn check_usc_equivalence<M: AsRef<SetFunction> + ?Sized>(mu: &M, extra_grid: &[Scalar]) -> EquivalenceCheck {
    let mu = mu.as_ref();
    let mut modulus_failure = None;
    let mut alternative_failure = None;
    let mut moduli = Vec::new();
    for eps in verdict_grid(mu, extra_grid) {
        let m = usc_modulus(mu, &eps);
        if !m.is_positive() && modulus_failure.is_none() {
            modulus_failure = Some((eps.clone(), m.witness.clone()));
        }
        moduli.push(m.entry());
        let mut best = Best::new();
        for a in mu.domain().iter() {
            let na = mu.n(a);
            for b in mu.domain().iter() {
                let nb = mu.n(b);
                if mu.exceeds(na, &nb.plus(&eps)) || mu.exceeds(nb, &na.plus(&eps)) {
                    best.offer(mu.n(&a.symmetric_difference(b)), || vec![*a, *b]);
                }
            }
        }
        let pair = best.finish(&eps);
        if !pair.is_positive() && alternative_failure.is_none() {
            alternative_failure = Some((eps.clone(), pair.witness));
        }
    }
    equivalence_report("usc_equivalence", modulus_failure, alternative_failure, moduli, mu)
}

/// Largest δ with `‖μ(A)‖ ∨ ‖μ(B)‖ < δ ⇒ ‖μ(A ∪ B)‖ < ε`. Witness `[A, B]`.
pub fn pgp_modulus<M: AsRef<SetFunction> + ?Sized>(mu: &M, eps: &Scalar) -> Modulus {
    let mu = mu.as_ref();
    let sets = mu.domain().sets();
    let limit = ExtRational::Finite(eps.clone());
    let mut best = Best::new();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i..] {
            if mu.reaches(mu.n(&a.union(b)), &limit) {
                let m = mu.n(a).max(mu.n(b));
                best.offer(m, || vec![*a, *b]);
            }
        }
    }
    best.finish(eps)
}

/// Largest δ with `‖μ(A)‖ + ‖μ(B)‖ < δ ⇒ ‖μ(A ∪ B)‖ < ε`. Witness `[A, B]`.
pub fn ac_modulus<M: AsRef<SetFunction> + ?Sized>(mu: &M, eps: &Scalar) -> Modulus {
    let mu = mu.as_ref();
    let sets = mu.domain().sets();
    let limit = ExtRational::Finite(eps.clone());
    let mut best = Best::new();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i..] {
            if mu.reaches(mu.n(&a.union(b)), &limit) {
                best.offer(&(mu.n(a) + mu.n(b)), || vec![*a, *b]);
            }
        }
    }
    best.finish(eps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaSequence {
    #[serde(serialize_with = "serialize_deltas")]
    pub deltas: Vec<Scalar>,
    pub policy: &'static str,
}

fn serialize_deltas<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_scalar))
}

/// δ_1, …, δ_{k_max} with `0 < δ_{k+1} < 2^{-(k+1)} ∧ δ_k` such that any two
/// sets below δ_{k+1} have union below δ_k (and sets below δ_1 have union
/// below 1/2), instantiated by [`DELTA_POLICY`].
pub fn delta_sequence<M: AsRef<SetFunction> + ?Sized>(mu: &M, k_max: usize) -> Result<DeltaSequence> {
    let mu = mu.as_ref();
    let half = ratio(1, 2);
    let mut prev = half.clone();
    let mut deltas = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let m = pgp_modulus(mu, &prev);
        if !m.is_positive() {
            return Err(Error::PgpFails {
                level: k,
                a: m.witness[0],
                b: m.witness[1],
            });
        }
        let mut bound = pow2_neg(k as u32).min(prev.clone());
        if let ExtRational::Finite(d) = &m.delta {
            bound = bound.min(d.clone());
        }
        let next = bound * &half;
        deltas.push(next.clone());
        prev = next;
    }
    Ok(DeltaSequence {
        deltas,
        policy: DELTA_POLICY,
    })
}

/// Checks `‖μ(A_{k+1} ∪ … ∪ A_{k+p})‖ < δ_k` for every `k, p` that fit in the
/// family (1-based, `deltas[k-1] = δ_k`). Preconditions: members in the
/// domain, pairwise disjoint, `‖μ(A_k)‖ < δ_k`, and no more members than
/// deltas; otherwise the verdict is vacuous.
pub fn verify_chained_union_bound<M: AsRef<SetFunction> + ?Sized>(
    mu: &M,
    deltas: &[Scalar],
    family: &[FiniteSet],
) -> PropertyReport {
    const NAME: &str = "chained_union_bound";
    let mu = mu.as_ref();
    if family.len() > deltas.len() {
        return PropertyReport::vacuous(NAME, "family longer than the delta sequence");
    }
    for (i, a) in family.iter().enumerate() {
        let Ok(na) = mu.norm(a) else {
            return PropertyReport::vacuous(NAME, format!("member {a} outside the domain"));
        };
        if family[..i].iter().any(|b| !a.is_disjoint(b)) {
            return PropertyReport::vacuous(NAME, format!("member {a} overlaps an earlier member"));
        }
        if *na >= ExtRational::Finite(deltas[i].clone()) {
            return PropertyReport::vacuous(
                NAME,
                format!("norm of A_{} = {a} is {na}, not below delta_{} = {}", i + 1, i + 1, format_scalar(&deltas[i])),
            );
        }
    }
    let n = family.len();
    for k in 1..n {
        let bound = ExtRational::Finite(deltas[k - 1].clone());
        let mut union = mu.domain().empty_set();
        for p in 1..=n - k {
            union = union.union(&family[k + p - 1]);
            if mu.reaches(mu.n(&union), &bound) {
                return PropertyReport::fails(
                    NAME,
                    Witness::new(
                        vec![union],
                        vec![mu.v(&union).clone()],
                        format!("k = {k}, p = {p}: union norm {} not below delta_k", mu.n(&union)),
                    ),
                );
            }
        }
    }
    PropertyReport::holds(NAME)
}

/// Runs [`verify_chained_union_bound`] on `count` random families drawn
/// with a seeded generator. Each family takes, for `k = 1, 2, …`, a random
/// domain set disjoint from the earlier ones with norm below `δ_k`, and stops
/// early when none exists. Vacuous if the delta sequence cannot be built.
pub fn sample_chained_union_bound<M: AsRef<SetFunction> + ?Sized>(
    mu: &M,
    k_max: usize,
    count: usize,
    seed: u64,
) -> PropertyReport {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    const NAME: &str = "chained_union_bound";
    let mu = mu.as_ref();
    let deltas = match delta_sequence(mu, k_max) {
        Ok(d) => d.deltas,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    if deltas.is_empty() {
        return PropertyReport::vacuous(NAME, "empty delta sequence");
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut longest = 0;
    for _ in 0..count {
        let len = rng.gen_range(1..=deltas.len());
        let mut used = mu.domain().empty_set();
        let mut family = Vec::with_capacity(len);
        for delta in &deltas[..len] {
            let bound = ExtRational::Finite(delta.clone());
            let candidates: Vec<&FiniteSet> = mu
                .domain()
                .iter()
                .filter(|a| a.is_disjoint(&used) && *mu.n(a) < bound)
                .collect();
            let Some(a) = candidates.choose(&mut rng) else { break };
            used = used.union(a);
            family.push(**a);
        }
        longest = longest.max(family.len());
        let r = verify_chained_union_bound(mu, &deltas, &family);
        if r.verdict != Verdict::Holds {
            return r.with_note(format!("random family {family:?}"));
        }
    }
    PropertyReport::holds(NAME).with_note(format!(
        "{count} random admissible families (seed {seed}, longest {longest}) against {} deltas",
        deltas.len()
    ))
}
