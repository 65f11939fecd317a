use std::fmt;

use num::traits::Zero;
use serde::{Serialize, Serializer};

use super::function::SetFunction;
use super::moduli::{ac_modulus, sc_modulus, verdict_grid};
use crate::lattice::LatticeValue;
use crate::numeric::{format_scalar, ExtRational, Scalar};
use crate::report::{ModulusEntry, PropertyReport, Verdict, Witness};
use crate::setring::{enumerate_subrings, FiniteSet};

fn le_with_slack(mu: &SetFunction, x: &LatticeValue, y: &LatticeValue) -> bool {
    match (x, y) {
        (LatticeValue::Vector(a), LatticeValue::Vector(b)) => {
            a.iter().zip(b).all(|(p, q)| *p <= q + mu.slack())
        }
        _ => x.le(y),
    }
}

/// `A ⊂ B ⇒ μ(A) ≤ μ(B)` componentwise, over all pairs of the domain.
pub fn check_monotone<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> PropertyReport {
    let mu = mu.as_ref();
    for a in mu.domain().iter() {
        for b in mu.domain().iter().filter(|b| *b != a && a.is_subset(b)) {
            let (va, vb) = (mu.v(a), mu.v(b));
            if !le_with_slack(mu, va, vb) {
                return PropertyReport::fails(
                    "monotone",
                    Witness::new(vec![*a, *b], vec![va.clone(), vb.clone()], format!("{a} ⊂ {b} but μ({a}) ≰ μ({b})")),
                );
            }
        }
    }
    PropertyReport::holds("monotone")
}

fn empty_set_is_null(mu: &SetFunction, property: &str, reduction: &str) -> PropertyReport {
    let empty = mu.domain().empty_set();
    let report = if mu.n(&empty).is_zero() {
        PropertyReport::holds(property)
    } else {
        PropertyReport::fails(
            property,
            Witness::new(vec![empty], vec![mu.v(&empty).clone()], "‖μ(∅)‖ ≠ 0"),
        )
    };
    report.with_note(reduction)
}

/// On a finite ring every sequence decreasing to ∅ is eventually ∅, so
/// continuity reduces to `‖μ(∅)‖ = 0`.
pub fn check_continuity<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> PropertyReport {
    empty_set_is_null(
        mu.as_ref(),
        "continuity",
        "finite ring: every sequence decreasing to the empty set is eventually empty, so continuity reduces to norm(mu(empty)) = 0",
    )
}

/// On a finite ring a pairwise-disjoint sequence is eventually ∅, so
/// exhaustivity reduces to `‖μ(∅)‖ = 0`.
pub fn check_exhaustive<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> PropertyReport {
    empty_set_is_null(
        mu.as_ref(),
        "exhaustive",
        "finite ring: every pairwise-disjoint sequence is eventually empty, so exhaustivity reduces to norm(mu(empty)) = 0",
    )
}

/// `‖μ(A ∪ B)‖ ≤ ‖μ(A)‖ + ‖μ(B)‖` for all pairs.
pub fn check_subadditive<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> PropertyReport {
    let mu = mu.as_ref();
    let sets = mu.domain().sets();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i..] {
            let u = a.union(b);
            if mu.exceeds(mu.n(&u), &(mu.n(a) + mu.n(b))) {
                return PropertyReport::fails(
                    "subadditive",
                    Witness::new(
                        vec![*a, *b, u],
                        vec![mu.v(a).clone(), mu.v(b).clone(), mu.v(&u).clone()],
                        "norm of the union exceeds the sum of norms",
                    ),
                );
            }
        }
    }
    PropertyReport::holds("subadditive")
}

/// `‖μ(A ∪ B)‖ = ‖μ(A)‖ + ‖μ(B)‖` for all disjoint pairs.
pub fn check_additive<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> PropertyReport {
    let mu = mu.as_ref();
    let sets = mu.domain().sets();
    for (i, a) in sets.iter().enumerate() {
        for b in sets[i..].iter().filter(|b| a.is_disjoint(b)) {
            let u = a.union(b);
            if mu.differs(mu.n(&u), &(mu.n(a) + mu.n(b))) {
                return PropertyReport::fails(
                    "additive",
                    Witness::new(
                        vec![*a, *b, u],
                        vec![mu.v(a).clone(), mu.v(b).clone(), mu.v(&u).clone()],
                        "disjoint pair whose union norm differs from the sum of norms",
                    ),
                );
            }
        }
    }
    PropertyReport::holds("additive")
}

/// Strength classes, weakest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubmeasureClass {
    NotD,
    D,
    Du,
    Ds,
    Da,
}

impl fmt::Display for SubmeasureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubmeasureClass::NotD => "not-D",
            SubmeasureClass::D => "D",
            SubmeasureClass::Du => "D_u",
            SubmeasureClass::Ds => "D_s",
            SubmeasureClass::Da => "D_a",
        })
    }
}

impl Serialize for SubmeasureClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassFlags {
    pub monotone: bool,
    pub continuous: bool,
    pub subadditively_continuous: bool,
    pub uniformly_subadditively_continuous: bool,
    pub subadditive: bool,
    pub additive: bool,
}

impl ClassFlags {
    /// The strongest class whose defining conditions all hold.
    pub fn class(&self) -> SubmeasureClass {
        let base = self.monotone && self.continuous;
        if base && self.additive {
            SubmeasureClass::Da
        } else if base && self.subadditive {
            SubmeasureClass::Ds
        } else if base && self.uniformly_subadditively_continuous {
            SubmeasureClass::Du
        } else if base && self.subadditively_continuous {
            SubmeasureClass::D
        } else {
            SubmeasureClass::NotD
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: SubmeasureClass,
    pub flags: ClassFlags,
    pub reports: Vec<PropertyReport>,
}

/// Runs every defining condition and returns the strongest class.
///
/// (s.c.) and (u.s.c.) are decided on [`verdict_grid`], which makes the
/// verdicts exact for finite rings.
pub fn classify<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> Classification {
    classify_with_grid(mu.as_ref(), &[])
}

pub(crate) fn classify_with_grid(mu: &SetFunction, extra_grid: &[Scalar]) -> Classification {
    let monotone = check_monotone(mu);
    let continuity = check_continuity(mu);

    let mut sc_failure: Option<Witness> = None;
    let mut usc_rows = Vec::new();
    for eps in verdict_grid(mu, extra_grid) {
        let mut min = ExtRational::Infinite;
        for a in mu.domain().iter() {
            let m = sc_modulus(mu, a, &eps).expect("domain member");
            if !m.is_positive() && sc_failure.is_none() {
                let b = m.witness[0];
                sc_failure = Some(Witness::new(
                    vec![*a, b],
                    vec![mu.v(a).clone(), mu.v(&b).clone()],
                    format!("null set {b} violates (3a)/(3b) at A = {a}, epsilon = {}", format_scalar(&eps)),
                ));
            }
            min = min.min(m.delta);
        }
        usc_rows.push(ModulusEntry { epsilon: eps, delta: min });
    }
    let usc_holds = usc_rows.iter().all(|r| !r.delta.is_zero());
    let sc = PropertyReport::from_witness("subadditively_continuous", sc_failure.clone())
        .with_note("delta(A, epsilon) > 0 for every A and every epsilon of the verdict grid");
    let usc = PropertyReport::from_witness("uniformly_subadditively_continuous", if usc_holds { None } else { sc_failure })
        .with_moduli(usc_rows);
    let subadditive = check_subadditive(mu);
    let additive = check_additive(mu);

    let flags = ClassFlags {
        monotone: monotone.holds_verdict(),
        continuous: continuity.holds_verdict(),
        subadditively_continuous: sc.holds_verdict(),
        uniformly_subadditively_continuous: usc.holds_verdict(),
        subadditive: subadditive.holds_verdict(),
        additive: additive.holds_verdict(),
    };
    Classification {
        class: flags.class(),
        flags,
        reports: vec![monotone, continuity, sc, usc, subadditive, additive],
    }
}

/// `‖μ(A)‖ ≤ Σ ‖μ(A_i)‖` whenever `A ⊆ A_1 ∪ … ∪ A_m`, for every cover by at
/// most `max_cover` distinct domain sets. On a finite ring countable covers
/// reduce to finite ones. Vacuous unless μ is at least D_s.
pub fn check_sigma_subadditive<M: AsRef<SetFunction> + ?Sized>(mu: &M, max_cover: usize) -> PropertyReport {
    const NAME: &str = "sigma_subadditive";
    let mu = mu.as_ref();
    let class = classify(mu).class;
    if class < SubmeasureClass::Ds {
        return PropertyReport::vacuous(NAME, format!("requires a D_s-submeasure, classified {class}"));
    }
    let sets = mu.domain().sets();
    let mut chosen: Vec<usize> = Vec::with_capacity(max_cover);
    let mut failure = None;
    covers(sets.len(), max_cover, 0, &mut chosen, &mut |idx| {
        let union = idx.iter().fold(mu.domain().empty_set(), |u, &i| u.union(&sets[i]));
        let total = idx
            .iter()
            .fold(ExtRational::zero(), |acc, &i| &acc + mu.n(&sets[i]));
        for a in mu.domain().class().subsets_of(&union) {
            if mu.exceeds(mu.n(a), &total) {
                let mut w: Vec<FiniteSet> = vec![*a];
                w.extend(idx.iter().map(|&i| sets[i]));
                let values = w.iter().map(|s| mu.v(s).clone()).collect();
                failure = Some(Witness::new(w, values, format!("norm of A exceeds cover total {total}")));
                return false;
            }
        }
        true
    });
    PropertyReport::from_witness(NAME, failure)
        .with_note(format!("all covers by at most {max_cover} ring members"))
}

/// Calls `visit` on every nonempty index combination of size ≤ `max`;
/// stops early when it returns false.
fn covers(n: usize, max: usize, start: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    for i in start..n {
        chosen.push(i);
        if !visit(chosen) {
            return false;
        }
        if chosen.len() < max && !covers(n, max, i + 1, chosen, visit) {
            return false;
        }
        chosen.pop();
    }
    true
}

/// Finite form of (a.c.): for every ε of the verdict grid there is δ with
/// `‖μ(A)‖ + ‖μ(B)‖ < δ ⇒ ‖μ(A ∪ B)‖ < ε`. Every D_u instance is expected
/// to pass; a D_u instance failing is flagged in the notes.
pub fn check_ac_condition<M: AsRef<SetFunction> + ?Sized>(mu: &M) -> PropertyReport {
    const NAME: &str = "ac_condition";
    let mu = mu.as_ref();
    let mut failure = None;
    let mut rows = Vec::new();
    for eps in verdict_grid(mu, &[]) {
        let m = ac_modulus(mu, &eps);
        if !m.is_positive() && failure.is_none() {
            let values = m.witness.iter().map(|s| mu.v(s).clone()).collect();
            failure = Some(Witness::new(
                m.witness.clone(),
                values,
                format!("null pair with union norm at least {}", format_scalar(&eps)),
            ));
        }
        rows.push(ModulusEntry {
            epsilon: eps,
            delta: m.delta,
        });
    }
    let class = classify(mu).class;
    let failed = failure.is_some();
    let mut report = PropertyReport::from_witness(NAME, failure).with_moduli(rows);
    if class >= SubmeasureClass::Du {
        report = report.with_note(if failed {
            "classified D_u yet (a.c.) fails: contradicts the expectation that D_u-submeasures satisfy (a.c.)"
        } else {
            "classified D_u and (a.c.) holds, as expected for D_u-submeasures"
        });
    }
    report
}

/// Result of the exhaustive search for D-submeasures violating (a.c.).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcSearch {
    pub max_universe: usize,
    pub max_value: u32,
    pub instances_checked: usize,
    pub d_instances: usize,
    pub counterexample: Option<Vec<(FiniteSet, LatticeValue)>>,
    pub summary: String,
}

/// Enumerates every scalar table with integer values in `0..=max_value` and
/// `μ(∅) = 0` on every ring of universes up to `max_universe` (≤ 4), and
/// looks for one classified D that fails (a.c.).
pub fn search_ac_counterexamples(max_universe: usize, max_value: u32) -> crate::error::Result<AcSearch> {
    let mut instances_checked = 0;
    let mut d_instances = 0;
    for n in 1..=max_universe {
        for ring in enumerate_subrings(n)? {
            let free = ring.len() - 1;
            let base = max_value as u64 + 1;
            let total = base.pow(free as u32);
            for code in 0..total {
                let mut c = code;
                let values: Vec<LatticeValue> = ring
                    .iter()
                    .map(|s| {
                        if s.is_empty() {
                            LatticeValue::zero(1)
                        } else {
                            let v = (c % base) as i64;
                            c /= base;
                            LatticeValue::from_ints(&[v])
                        }
                    })
                    .collect();
                let mu = SetFunction::from_values(ring.clone(), 1, Scalar::zero(), values)?;
                instances_checked += 1;
                if classify(&mu).class < SubmeasureClass::D {
                    continue;
                }
                d_instances += 1;
                let ac = check_ac_condition(&mu);
                if ac.verdict == Verdict::Fails {
                    let table = mu.entries().map(|(s, v)| (*s, v.clone())).collect();
                    return Ok(AcSearch {
                        max_universe,
                        max_value,
                        instances_checked,
                        d_instances,
                        counterexample: Some(table),
                        summary: "found a D-submeasure violating (a.c.)".into(),
                    });
                }
            }
        }
    }
    Ok(AcSearch {
        max_universe,
        max_value,
        instances_checked,
        d_instances,
        counterexample: None,
        summary: format!(
            "no counterexample found at this scale (universes up to {max_universe}, values up to {max_value})"
        ),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::numeric::int;
    use crate::setring::Ring;
    use crate::submeasure::{DistortionId, Submeasure};

    fn set(n: usize, pts: &[usize]) -> FiniteSet {
        FiniteSet::from_points(n, pts.iter().copied()).unwrap()
    }

    fn scalar_additive(w: &[i64]) -> Submeasure {
        Submeasure::additive(
            Ring::power_set(w.len()).unwrap(),
            w.iter().map(|x| LatticeValue::from_ints(&[*x])).collect(),
        )
        .unwrap()
    }

    fn sqrt3() -> Submeasure {
        Submeasure::distorted(
            Ring::power_set(3).unwrap(),
            vec![int(1), int(1), int(1)],
            DistortionId::Sqrt,
            vec![int(1)],
        )
        .unwrap()
    }

    #[test]
    fn monotone_cases() {
        assert!(check_monotone(&scalar_additive(&[1, 2, 0])).holds_verdict());
        assert!(check_monotone(&Submeasure::zero(Ring::power_set(2).unwrap(), 2).unwrap()).holds_verdict());

        let ring = Ring::power_set(2).unwrap();
        let mut t = BTreeMap::new();
        t.insert(set(2, &[]), LatticeValue::from_ints(&[0]));
        t.insert(set(2, &[0]), LatticeValue::from_ints(&[2]));
        t.insert(set(2, &[1]), LatticeValue::from_ints(&[0]));
        t.insert(set(2, &[0, 1]), LatticeValue::from_ints(&[1]));
        let mu = Submeasure::table(ring, 1, t).unwrap();
        let r = check_monotone(&mu);
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        assert_eq!(w.sets, vec![set(2, &[0]), set(2, &[0, 1])]);
        // re-evaluating the witness reproduces the violation
        assert!(!mu.evaluate(&w.sets[0]).unwrap().le(&mu.evaluate(&w.sets[1]).unwrap()));
    }

    #[test]
    fn continuity_and_exhaustive_cases() {
        assert!(check_continuity(&scalar_additive(&[1, 1])).holds_verdict());
        assert!(check_continuity(&sqrt3()).holds_verdict());
        let bad = Submeasure::table_from_fn(Ring::power_set(1).unwrap(), 1, |_| LatticeValue::from_ints(&[1])).unwrap();
        assert_eq!(check_continuity(&bad).verdict, Verdict::Fails);
        assert_eq!(check_exhaustive(&bad).verdict, Verdict::Fails);
        assert!(check_exhaustive(&scalar_additive(&[1, 1])).holds_verdict());
        assert!(check_exhaustive(&sqrt3()).notes[0].contains("finite ring"));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&scalar_additive(&[1, 2, 3])).class, SubmeasureClass::Da);
        assert_eq!(classify(&sqrt3()).class, SubmeasureClass::Ds);
        let mut t = BTreeMap::new();
        let ring = Ring::power_set(1).unwrap();
        t.insert(set(1, &[]), LatticeValue::from_ints(&[3]));
        t.insert(set(1, &[0]), LatticeValue::from_ints(&[1]));
        assert_eq!(classify(&Submeasure::table(ring, 1, t).unwrap()).class, SubmeasureClass::NotD);
    }

    #[test]
    fn classify_sc_failure_has_null_witness() {
        // μ({0}) = 0 but adding {0} to {1} jumps the norm
        let mu = Submeasure::table_from_fn(Ring::power_set(2).unwrap(), 1, |s| {
            LatticeValue::from_ints(&[match s.bits() {
                0 | 0b01 => 0,
                0b10 => 1,
                _ => 2,
            }])
        })
        .unwrap();
        let c = classify(&mu);
        assert!(c.flags.monotone && c.flags.continuous);
        assert!(!c.flags.subadditively_continuous);
        assert_eq!(c.class, SubmeasureClass::NotD);
        let w = c.reports[2].witness.as_ref().unwrap();
        assert!(mu.as_set_function().n(&w.sets[1]).is_zero());
    }

    #[test]
    fn superadditive_table_is_du() {
        let mu = Submeasure::table_from_fn(Ring::power_set(3).unwrap(), 1, |s| {
            LatticeValue::from_ints(&[(s.len() * s.len()) as i64])
        })
        .unwrap();
        assert_eq!(classify(&mu).class, SubmeasureClass::Du);
    }

    #[test]
    fn sigma_subadditive_cases() {
        let r = check_sigma_subadditive(&scalar_additive(&[1, 2, 3]), 4);
        assert!(r.holds_verdict());
        assert!(check_sigma_subadditive(&sqrt3(), 3).holds_verdict());
        let sq = Submeasure::table_from_fn(Ring::power_set(2).unwrap(), 1, |s| {
            LatticeValue::from_ints(&[(s.len() * s.len()) as i64])
        })
        .unwrap();
        assert_eq!(check_sigma_subadditive(&sq, 4).verdict, Verdict::Vacuous);
    }

    #[test]
    fn cover_enumeration_counts() {
        let mut count = 0;
        covers(6, 3, 0, &mut Vec::new(), &mut |_| {
            count += 1;
            true
        });
        assert_eq!(count, 6 + 15 + 20);
    }

    #[test]
    fn ac_condition_cases() {
        let r = check_ac_condition(&scalar_additive(&[1, 1, 1]));
        assert!(r.holds_verdict());
        assert!(r.notes.iter().any(|n| n.contains("as expected")));
        assert!(check_ac_condition(&Submeasure::zero(Ring::power_set(2).unwrap(), 1).unwrap()).holds_verdict());
        let nulls = Submeasure::table_from_fn(Ring::power_set(2).unwrap(), 1, |s| {
            LatticeValue::from_ints(&[if s.len() == 2 { 1 } else { 0 }])
        })
        .unwrap();
        assert_eq!(check_ac_condition(&nulls).verdict, Verdict::Fails);
    }

    #[test]
    fn ac_search_small_scale() {
        let s = search_ac_counterexamples(2, 2).unwrap();
        assert!(s.counterexample.is_none());
        assert!(s.summary.contains("no counterexample found at this scale"));
        assert!(s.d_instances > 0 && s.instances_checked > s.d_instances);
    }
}
