use std::sync::OnceLock;

use proptest::prelude::*;

use dsub_core::catalog::{catalog, CatalogEntry};
use dsub_core::choquet::{choquet_integral, Density};
use dsub_core::dyadic::{check_sampled_subadditivity, inner_refine, outer_refine, DyadicSet, IntervalRule, TargetSet};
use dsub_core::extension::{check_hypotheses, mu_star_function, r_zero};
use dsub_core::fntopology::{closure, u_epsilon};
use dsub_core::lattice::LatticeValue;
use dsub_core::numeric::{int, ratio, ExtRational, Scalar};
use dsub_core::setring::{enumerate_subrings, generate_ring, hereditary_class, FiniteSet, Ring, SetClass};
use dsub_core::submeasure::{
    classify, pgp_modulus, sc_modulus, usc_modulus, DistortionId, SetFunction, Submeasure, SubmeasureClass,
};

fn rings() -> &'static [Ring] {
    static RINGS: OnceLock<Vec<Ring>> = OnceLock::new();
    RINGS.get_or_init(|| (1..=4).flat_map(|n| enumerate_subrings(n).unwrap()).collect())
}

fn instance(ring_ix: usize, entry_ix: usize) -> (Ring, CatalogEntry) {
    let ring = rings()[ring_ix % rings().len()].clone();
    let mut entries = catalog(&ring).unwrap();
    let e = entries.swap_remove(entry_ix % entries.len());
    (ring, e)
}

fn cone_vector(dim: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..50, 1i64..12), dim)
}

fn to_value(parts: &[(i64, i64)]) -> LatticeValue {
    LatticeValue::vector(parts.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
}

fn eps_strategy() -> impl Strategy<Value = Scalar> {
    (1i64..40, 1i64..40).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_is_additive_on_the_cone(x in cone_vector(3), y in cone_vector(3)) {
        let (a, b) = (to_value(&x), to_value(&y));
        let sum = a.add(&b).unwrap();
        prop_assert_eq!(sum.norm(), &a.norm() + &b.norm());
        prop_assert!(a.le(&sum) && b.le(&sum));
        prop_assert!(a.norm() <= sum.norm());
    }

    #[test]
    fn join_and_meet_bound_the_pair(x in cone_vector(2), y in cone_vector(2)) {
        let (a, b) = (to_value(&x), to_value(&y));
        let (j, m) = (a.join(&b).unwrap(), a.meet(&b).unwrap());
        prop_assert!(a.le(&j) && b.le(&j) && m.le(&a) && m.le(&b));
        prop_assert_eq!(&j.norm() + &m.norm(), &a.norm() + &b.norm());
    }

    #[test]
    fn generated_rings_are_closed(n in 1usize..=4, gens in prop::collection::vec(0u64..16, 0..4)) {
        let sets: Vec<FiniteSet> = gens.iter().map(|g| FiniteSet::from_bits(n, g & ((1 << n) - 1)).unwrap()).collect();
        let class = SetClass::new(n, sets.clone()).unwrap();
        let ring = generate_ring(n, &class).unwrap();
        prop_assert!(ring.class().ring_violation().is_none());
        for s in &sets {
            prop_assert!(ring.contains(s));
        }
        let hered = hereditary_class(&ring);
        prop_assert!(hered.class().ring_violation().is_none());
        prop_assert!(ring.is_subring_of(&hered));
        prop_assert_eq!(hered.len(), 1usize << ring.top_set().len());
    }

    #[test]
    fn sc_modulus_shrinks_with_epsilon(r in any::<usize>(), e in any::<usize>(), a in any::<usize>(),
                                       lo in eps_strategy(), hi in eps_strategy()) {
        let (ring, entry) = instance(r, e);
        let set = ring.sets()[a % ring.len()];
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let small = sc_modulus(&entry.submeasure, &set, &lo).unwrap();
        let large = sc_modulus(&entry.submeasure, &set, &hi).unwrap();
        prop_assert!(small.delta <= large.delta, "{}: {:?} vs {:?}", entry.name, small, large);
    }

    #[test]
    fn usc_modulus_is_the_least_set_modulus(r in any::<usize>(), e in any::<usize>(), eps in eps_strategy()) {
        let (ring, entry) = instance(r, e);
        let least = ring
            .iter()
            .map(|a| sc_modulus(&entry.submeasure, a, &eps).unwrap().delta)
            .min()
            .unwrap();
        prop_assert_eq!(usc_modulus(&entry.submeasure, &eps).delta, least);
    }

    #[test]
    fn pgp_modulus_is_positive_for_uniform_classes(r in any::<usize>(), e in any::<usize>(), eps in eps_strategy()) {
        let (_, entry) = instance(r, e);
        if classify(&entry.submeasure).class >= SubmeasureClass::Du {
            prop_assert!(usc_modulus(&entry.submeasure, &eps).is_positive());
            prop_assert!(pgp_modulus(&entry.submeasure, &eps).is_positive(), "{}", entry.name);
        }
    }

    #[test]
    fn neighborhoods_are_normal_and_nested(r in any::<usize>(), e in any::<usize>(),
                                           lo in eps_strategy(), hi in eps_strategy()) {
        let (_, entry) = instance(r, e);
        if !classify(&entry.submeasure).flags.monotone {
            return Ok(());
        }
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (small, large) = (u_epsilon(&entry.submeasure, &lo), u_epsilon(&entry.submeasure, &hi));
        prop_assert!(small.is_subclass_of(&large));
        let ring = entry.submeasure.domain();
        for a in small.iter() {
            for b in ring.class().subsets_of(a) {
                prop_assert!(small.contains(b));
            }
        }
    }

    #[test]
    fn closure_is_extensive_and_idempotent(r in any::<usize>(), e in any::<usize>(), s in any::<usize>()) {
        let (ring, entry) = instance(r, e);
        let subs: Vec<Ring> = rings().iter().filter(|q| q.universe_size() == ring.universe_size() && q.is_subring_of(&ring)).cloned().collect();
        let sub = &subs[s % subs.len()];
        let mu = entry.submeasure.as_set_function();
        // ρ is a pseudometric only when the empty set is null
        prop_assume!(mu.norm(&ring.empty_set()).unwrap().is_zero());
        let once = closure(sub.class(), ring.class(), mu).unwrap();
        prop_assert!(sub.class().is_subclass_of(&once));
        prop_assert_eq!(closure(&once, ring.class(), mu).unwrap(), once);
    }

    #[test]
    fn outer_extension_agrees_and_is_monotone(r in any::<usize>(), e in any::<usize>()) {
        let (ring, entry) = instance(r, e);
        let mu = entry.submeasure.as_set_function();
        if check_hypotheses(mu).is_err() {
            return Ok(());
        }
        let star = mu_star_function(mu).unwrap();
        for a in ring.iter() {
            prop_assert_eq!(star.value(a).unwrap(), mu.value(a).unwrap());
        }
        let all = star.domain();
        for a in all.iter() {
            for b in all.class().supersets_of(a) {
                prop_assert!(star.value(a).unwrap().le(star.value(b).unwrap()));
            }
        }
        let r0 = r_zero(mu).unwrap();
        prop_assert!(ring.class().is_subclass_of(&r0));
        for a in r0.iter().filter(|a| star.norm(a).unwrap().is_zero()) {
            for b in all.class().subsets_of(a) {
                prop_assert!(r0.contains(b), "null {:?} has subset {:?} outside R0", a, b);
            }
        }
    }

    #[test]
    fn choquet_of_additive_is_the_weighted_sum(w in prop::collection::vec(0i64..9, 3),
                                               f in prop::collection::vec(0i64..9, 3), bits in 0u64..8) {
        let ring = Ring::power_set(3).unwrap();
        let weights: Vec<LatticeValue> = w.iter().map(|&x| LatticeValue::from_ints(&[x])).collect();
        let mu = Submeasure::additive(ring, weights).unwrap();
        let a = FiniteSet::from_bits(3, bits).unwrap();
        let value = choquet_integral(mu.as_set_function(), &Density::from_ints(&f).unwrap(), &a).unwrap();
        let expected: i64 = a.points().map(|t| w[t] * f[t]).sum();
        prop_assert_eq!(value, LatticeValue::from_ints(&[expected]));
    }

    #[test]
    fn choquet_is_homogeneous_and_monotone_in_the_density(r in any::<usize>(), e in any::<usize>(),
                                                          f in prop::collection::vec(0i64..6, 4),
                                                          bump in prop::collection::vec(0i64..3, 4),
                                                          c in 1i64..7, a in any::<usize>()) {
        // the power set keeps every density measurable
        let n = 1 + r % 4;
        let ring = Ring::power_set(n).unwrap();
        let mut entries = catalog(&ring).unwrap();
        let entry = entries.swap_remove(e % entries.len());
        let mu = entry.submeasure.as_set_function();
        let set = ring.sets()[a % ring.len()];
        let g: Vec<i64> = f[..n].iter().zip(&bump).map(|(x, b)| x + b).collect();
        let (f, g) = (Density::from_ints(&f[..n]).unwrap(), Density::from_ints(&g).unwrap());
        let base = choquet_integral(mu, &f, &set).unwrap();
        let scaled = choquet_integral(mu, &f.scale(&int(c)).unwrap(), &set).unwrap();
        prop_assert_eq!(scaled, base.scale(&int(c), mu.dim()));
        if classify(mu).flags.monotone {
            prop_assert!(base.le(&choquet_integral(mu, &g, &set).unwrap()), "{}", entry.name);
        }
    }

    #[test]
    fn refinements_increase_with_depth(a in 0i64..64, len in 1i64..64, k in 1u32..20) {
        let lo = ratio(a, 64);
        let hi = ratio((a + len).min(64), 64);
        prop_assume!(lo < hi);
        let target = TargetSet::interval(lo.clone(), hi.clone()).unwrap();
        let (inner, next) = (inner_refine(&target, k).unwrap(), inner_refine(&target, k + 1).unwrap());
        let (outer, next_outer) = (outer_refine(&target, k).unwrap(), outer_refine(&target, k + 1).unwrap());
        prop_assert!(inner.is_subset(&next) && next_outer.is_subset(&outer));
        let exact = &hi - &lo;
        prop_assert!(inner.exact_length() <= exact && exact <= outer.exact_length());
        prop_assert!(&exact - inner.exact_length() <= ratio(2, 1) / int(1i64 << k));
    }

    #[test]
    fn dyadic_lengths_are_modular(x in prop::collection::vec((0u64..64, 1u64..16), 1..4),
                                  y in prop::collection::vec((0u64..64, 1u64..16), 1..4)) {
        let build = |iv: &[(u64, u64)]| {
            iv.iter().fold(DyadicSet::empty(), |acc, &(p, w)| {
                acc.union(&DyadicSet::interval(6, p, (p + w).min(64)).unwrap())
            })
        };
        let (a, b) = (build(&x), build(&y));
        let lhs = a.union(&b).exact_length() + a.intersection(&b).exact_length();
        prop_assert_eq!(lhs, a.exact_length() + b.exact_length());
        prop_assert!(a.difference(&b).is_disjoint(&b));
        prop_assert_eq!(a.symmetric_difference(&b), a.difference(&b).union(&b.difference(&a)));
    }

    #[test]
    fn sampled_interval_rules_are_subadditive(seed in any::<u64>(), which in 0usize..4) {
        let d = [DistortionId::Identity, DistortionId::Sqrt, DistortionId::Cap2x, DistortionId::XOver1px][which];
        let rule = IntervalRule::new(vec![d, DistortionId::Sqrt]).unwrap();
        let report = check_sampled_subadditivity(&rule, 200, 12, seed, 1e-12).unwrap();
        prop_assert!(report.holds_verdict(), "{:?}", report);
    }
}

#[test]
fn norm_additivity_on_many_random_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        LatticeValue::vector((0..4).map(|_| ratio(rng.gen_range(0..1000), rng.gen_range(1..100))).collect()).unwrap()
    };
    for _ in 0..10_000 {
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        assert_eq!(a.add(&b).unwrap().norm(), &a.norm() + &b.norm());
    }
}

#[test]
fn inner_norm_infimum_over_intersection_closed_class() {
    // For a monotone table, the least norm over members containing E equals
    // the norm at the intersection of those members.
    for ring in rings() {
        for entry in catalog(ring).unwrap() {
            let mu = entry.submeasure.as_set_function();
            if !classify(mu).flags.monotone {
                continue;
            }
            for e in hereditary_class(ring).iter() {
                let above: Vec<&FiniteSet> = ring.class().supersets_of(e).collect();
                if above.is_empty() {
                    continue;
                }
                let least = above.iter().map(|a| mu.norm(a).unwrap().clone()).min().unwrap();
                let meet = above.iter().fold(ring.top_set(), |acc, a| acc.intersection(a));
                assert_eq!(&least, mu.norm(&meet).unwrap(), "{} at {e:?}", entry.name);
            }
        }
    }
}

#[test]
fn zero_norm_means_zero_value() {
    for ring in rings().iter().take(20) {
        for entry in catalog(ring).unwrap() {
            let mu: &SetFunction = entry.submeasure.as_set_function();
            for (a, v) in mu.entries() {
                assert_eq!(v.norm() == ExtRational::zero(), v.is_zero(), "{} at {a:?}", entry.name);
                assert!(!v.is_top() || v.norm() == ExtRational::Infinite);
            }
        }
    }
}

