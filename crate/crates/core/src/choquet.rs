//! Discrete Choquet integral of a nonnegative density against a
//! lattice-valued set function, and the submeasure it induces.

use num::traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{l1_distance, LatticeValue};
use crate::numeric::{format_scalar, Scalar};
use crate::report::{PropertyReport, Witness};
use crate::setring::{FiniteSet, Ring};
use crate::submeasure::{classify, pgp_modulus, standard_grid, SetFunction, Submeasure};

/// A nonnegative rational function on the universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Density {
    values: Vec<Scalar>,
}

impl Density {
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::NegativeComponent(format_scalar(v)));
        }
        Ok(Density { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Density::new(values.iter().map(|v| crate::numeric::int(*v)).collect())
    }

    pub fn constant(universe_size: usize, c: Scalar) -> Result<Self> {
        Density::new(vec![c; universe_size])
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn at(&self, t: usize) -> &Scalar {
        &self.values[t]
    }

    pub fn scale(&self, c: &Scalar) -> Result<Density> {
        Density::new(self.values.iter().map(|v| v * c).collect())
    }

    /// Distinct values of `f` on `a`, ascending, with 0 prepended.
    fn levels(&self, a: &FiniteSet) -> Vec<Scalar> {
        let mut xs: Vec<Scalar> = a.points().map(|t| self.values[t].clone()).collect();
        xs.push(Scalar::zero());
        xs.sort();
        xs.dedup();
        xs
    }

    /// `{t ∈ a : f(t) ≥ x}`.
    pub fn level_set(&self, a: &FiniteSet, x: &Scalar) -> FiniteSet {
        let bits = a
            .points()
            .filter(|&t| self.values[t] >= *x)
            .fold(0u64, |b, t| b | (1 << t));
        FiniteSet::from_bits(a.universe_size(), bits).expect("subset of a")
    }

    /// First level `x ≥ 0` at which `{t : f(t) > x}` leaves the ring.
    pub fn measurability_violation(&self, ring: &Ring) -> Option<(Scalar, FiniteSet)> {
        let full = FiniteSet::full(ring.universe_size()).ok()?;
        let levels = self.levels(&full);
        // {f > x} is constant on [x_{j-1}, x_j), so the left endpoints suffice
        levels.iter().find_map(|x| {
            let bits = full
                .points()
                .filter(|&t| self.values[t] > *x)
                .fold(0u64, |b, t| b | (1 << t));
            let s = FiniteSet::from_bits(ring.universe_size(), bits).expect("in universe");
            (!ring.contains(&s)).then(|| (x.clone(), s))
        })
    }

    pub fn is_measurable(&self, ring: &Ring) -> bool {
        self.measurability_violation(ring).is_none()
    }
}

impl Serialize for Density {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter().map(format_scalar))
    }
}

/// `(C)∫_A f dμ = Σ_j (x_j − x_{j−1}) · μ({t ∈ A : f(t) ≥ x_j})` over the
/// sorted distinct values of `f` on `A` with `x_0 = 0`.
///
/// On `[x_{j−1}, x_j)` the strict level set `{f > x}` equals `{f ≥ x_j}`,
/// so the strip sum is the layer-cake integral exactly.
pub fn choquet_integral(mu: &SetFunction, f: &Density, a: &FiniteSet) -> Result<LatticeValue> {
    if f.values.len() != mu.domain().universe_size() {
        return Err(Error::InvalidRule(format!(
            "density has {} values for a universe of size {}",
            f.values.len(),
            mu.domain().universe_size()
        )));
    }
    mu.value(a)?;
    let levels = f.levels(a);
    let mut total = LatticeValue::zero(mu.dim());
    for w in levels.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let s = f.level_set(a, hi);
        let value = mu.value(&s).map_err(|_| Error::NonMeasurable {
            level: format_scalar(lo),
            set: s,
        })?;
        total = total.add(&value.scale(&(hi - lo), mu.dim()))?;
    }
    Ok(total)
}

/// `ν_f(A) = (C)∫_A f dμ` as a submeasure on the same ring.
pub fn derived_submeasure(mu: &Submeasure, f: &Density) -> Result<Submeasure> {
    if let Some((x, s)) = f.measurability_violation(mu.domain()) {
        return Err(Error::NonMeasurable {
            level: format_scalar(&x),
            set: s,
        });
    }
    Submeasure::choquet_derived(mu.clone(), f.clone())
}

fn subtract(a: &LatticeValue, b: &LatticeValue) -> Option<Vec<Scalar>> {
    match (a.components(), b.components()) {
        (Some(x), Some(y)) => Some(x.iter().zip(y).map(|(p, q)| p - q).collect()),
        _ => None,
    }
}

/// Checks `‖ν_f(A) − ν_g(A)‖ ≤ τ · ‖μ(A)‖` with `τ = max_{t∈A} |f(t) − g(t)|`.
///
/// The bound follows from `g − τ ≤ f ≤ g + τ` on `A`, the shift identity
/// `∫(h + τ) = ∫h + τ·μ(A)` and monotonicity in the integrand.
pub fn check_sup_lipschitz(mu: &SetFunction, f: &Density, g: &Density, a: &FiniteSet) -> PropertyReport {
    const NAME: &str = "sup_lipschitz";
    let empty = mu.domain().empty_set();
    if !crate::submeasure::check_monotone(mu).holds_verdict() || !mu.n(&empty).is_zero() {
        return PropertyReport::vacuous(NAME, "requires a monotone set function with mu(empty) = 0");
    }
    let (vf, vg) = match (choquet_integral(mu, f, a), choquet_integral(mu, g, a)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let tau = a
        .points()
        .map(|t| (f.at(t) - g.at(t)).abs())
        .max()
        .unwrap_or_else(Scalar::zero);
    let Ok(bound_norm) = mu.norm(a) else {
        return PropertyReport::vacuous(NAME, format!("{a} outside the domain"));
    };
    let bound = if tau.is_zero() {
        crate::numeric::ExtRational::zero()
    } else {
        match bound_norm.finite() {
            Some(n) => (n * &tau).into(),
            None => crate::numeric::ExtRational::Infinite,
        }
    };
    let diff = match subtract(&vf, &vg) {
        Some(d) => crate::numeric::ExtRational::Finite(d.iter().map(|x| x.abs()).sum()),
        None => l1_distance(&vf, &vg).unwrap_or(crate::numeric::ExtRational::Infinite),
    };
    let note = format!("tau = {}, difference norm {diff}, bound {bound}", format_scalar(&tau));
    if mu.exceeds(&diff, &bound) {
        PropertyReport::fails(
            NAME,
            Witness::new(vec![*a], vec![vf, vg], "difference of integrals exceeds tau * norm(mu(A))"),
        )
        .with_note(note)
    } else {
        PropertyReport::holds(NAME).with_note(note)
    }
}

/// If `μ` has the p.g.p. and `‖ν_f(T)‖ < ∞`, then `ν_f` has the p.g.p. on
/// the standard ε grid.
pub fn check_pgp_preservation(mu: &Submeasure, f: &Density) -> PropertyReport {
    const NAME: &str = "pgp_preservation";
    let grid = standard_grid();
    if let Some(eps) = grid.iter().find(|e| !pgp_modulus(mu, e).is_positive()) {
        return PropertyReport::vacuous(
            NAME,
            format!("base lacks the p.g.p. at epsilon = {}", format_scalar(eps)),
        );
    }
    let nu = match derived_submeasure(mu, f) {
        Ok(nu) => nu,
        Err(e) => return PropertyReport::vacuous(NAME, e.to_string()),
    };
    let top = nu.domain().top_set();
    if !nu.as_set_function().n(&top).is_finite() {
        return PropertyReport::vacuous(NAME, "norm of the derived value on the top set is infinite");
    }
    for eps in &grid {
        let m = pgp_modulus(&nu, eps);
        if !m.is_positive() {
            let values = m.witness.iter().map(|s| nu.as_set_function().v(s).clone()).collect();
            return PropertyReport::fails(
                NAME,
                Witness::new(m.witness, values, format!("p.g.p. modulus is 0 at epsilon = {}", format_scalar(eps))),
            );
        }
    }
    PropertyReport::holds(NAME).with_note(format!("derived submeasure classified {}", classify(&nu).class))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::numeric::{int, pow2_neg, ratio};
    use crate::submeasure::{DistortionId, SubmeasureClass};

    fn set(n: usize, pts: &[usize]) -> FiniteSet {
        FiniteSet::from_points(n, pts.iter().copied()).unwrap()
    }

    fn additive(w: &[i64]) -> Submeasure {
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

    /// Midpoint Riemann sum of `x ↦ μ({t ∈ A : f(t) > x})` with step `h`.
    fn riemann(mu: &SetFunction, f: &Density, a: &FiniteSet, h: &Scalar) -> LatticeValue {
        let top = a.points().map(|t| f.at(t).clone()).max().unwrap_or_else(Scalar::zero);
        let mut total = LatticeValue::zero(mu.dim());
        let mut x = Scalar::zero();
        while x < top {
            let mid = &x + h / int(2);
            let bits = a.points().filter(|&t| *f.at(t) > mid).fold(0u64, |b, t| b | 1 << t);
            let s = FiniteSet::from_bits(a.universe_size(), bits).unwrap();
            total = total.add(&mu.value(&s).unwrap().scale(h, mu.dim())).unwrap();
            x += h;
        }
        total
    }

    #[test]
    fn additive_example() {
        let mu = additive(&[1, 1]);
        let f = Density::from_ints(&[2, 1]).unwrap();
        let v = choquet_integral(mu.as_set_function(), &f, &set(2, &[0, 1])).unwrap();
        assert_eq!(v, LatticeValue::from_ints(&[3]));
    }

    #[test]
    fn table_example() {
        let ring = Ring::power_set(2).unwrap();
        let mut t = BTreeMap::new();
        t.insert(set(2, &[]), LatticeValue::from_ints(&[0]));
        t.insert(set(2, &[0]), LatticeValue::from_ints(&[1]));
        t.insert(set(2, &[1]), LatticeValue::from_ints(&[1]));
        t.insert(set(2, &[0, 1]), LatticeValue::from_ints(&[4]));
        let mu = Submeasure::table(ring, 1, t).unwrap();
        let f = Density::from_ints(&[2, 1]).unwrap();
        let a = set(2, &[0, 1]);
        let v = choquet_integral(mu.as_set_function(), &f, &a).unwrap();
        assert_eq!(v, LatticeValue::from_ints(&[5]));
        assert_eq!(riemann(mu.as_set_function(), &f, &a, &pow2_neg(12)), v);
    }

    #[test]
    fn zero_density_gives_zero() {
        let mu = sqrt3();
        let f = Density::from_ints(&[0, 0, 0]).unwrap();
        for a in mu.domain().iter() {
            assert!(choquet_integral(mu.as_set_function(), &f, a).unwrap().is_zero());
        }
    }

    #[test]
    fn duplicated_value_uses_closed_level_set() {
        // f(0) = f(1) = 1: on [0, 1) the strict level set {f > x} is {0,1}
        let mu = additive(&[1, 2, 4]);
        let f = Density::new(vec![int(1), int(1), ratio(5, 2)]).unwrap();
        let a = FiniteSet::full(3).unwrap();
        let v = choquet_integral(mu.as_set_function(), &f, &a).unwrap();
        assert_eq!(v, LatticeValue::vector(vec![int(1) + int(2) + ratio(5, 2) * int(4)]).unwrap());
        assert_eq!(f.level_set(&a, &int(1)), a);
    }

    #[test]
    fn non_measurable_level_is_named() {
        let ring = Ring::from_atoms(2, &[set(2, &[0, 1])]).unwrap();
        let mu = Submeasure::zero(ring, 1).unwrap();
        let f = Density::from_ints(&[2, 1]).unwrap();
        let err = choquet_integral(mu.as_set_function(), &f, &set(2, &[0, 1])).unwrap_err();
        assert_eq!(
            err,
            Error::NonMeasurable {
                level: "1".into(),
                set: set(2, &[0])
            }
        );
        assert!(!f.is_measurable(mu.domain()));
        assert!(derived_submeasure(&mu, &f).is_err());
        assert!(Density::from_ints(&[3, 3]).unwrap().is_measurable(mu.domain()));
        assert!(Density::from_ints(&[-1, 3]).is_err());
    }

    #[test]
    fn derived_classes() {
        let f = Density::from_ints(&[3, 1, 2]).unwrap();
        let d = derived_submeasure(&additive(&[1, 2, 3]), &f).unwrap();
        assert_eq!(classify(&d).class, SubmeasureClass::Da);
        // additive ν_f is reweighted additive
        assert_eq!(d.evaluate(&set(3, &[0, 2])).unwrap(), LatticeValue::from_ints(&[3 + 6]));

        let one = Density::from_ints(&[1, 1, 1]).unwrap();
        let s = sqrt3();
        let d = derived_submeasure(&s, &one).unwrap();
        assert_eq!(d.as_set_function().entries().collect::<Vec<_>>(), s.as_set_function().entries().collect::<Vec<_>>());
        assert_eq!(classify(&derived_submeasure(&s, &f).unwrap()).class, SubmeasureClass::Ds);
    }

    #[test]
    fn homogeneity_and_monotonicity() {
        let mu = sqrt3();
        let f = Density::new(vec![ratio(1, 3), int(2), ratio(3, 2)]).unwrap();
        let g = Density::new(vec![ratio(1, 2), int(2), int(2)]).unwrap();
        let c = ratio(7, 5);
        for a in mu.domain().iter() {
            let base = choquet_integral(mu.as_set_function(), &f, a).unwrap();
            let scaled = choquet_integral(mu.as_set_function(), &f.scale(&c).unwrap(), a).unwrap();
            assert_eq!(scaled, base.scale(&c, 1));
            assert!(base.le(&choquet_integral(mu.as_set_function(), &g, a).unwrap()));
        }
    }

    #[test]
    fn sup_lipschitz_examples() {
        let mu = additive(&[1, 1]);
        let f = Density::from_ints(&[2, 1]).unwrap();
        let g = Density::from_ints(&[1, 1]).unwrap();
        let a = set(2, &[0, 1]);
        let r = check_sup_lipschitz(mu.as_set_function(), &f, &g, &a);
        assert!(r.holds_verdict());
        assert!(r.notes[0].contains("tau = 1"));
        assert!(check_sup_lipschitz(mu.as_set_function(), &f, &f, &a).holds_verdict());
    }

    #[test]
    fn pgp_preservation_examples() {
        assert!(check_pgp_preservation(&additive(&[1, 2]), &Density::from_ints(&[5, 1]).unwrap()).holds_verdict());
        assert!(check_pgp_preservation(&sqrt3(), &Density::from_ints(&[1, 2, 3]).unwrap()).holds_verdict());
        let zero = Submeasure::zero(Ring::power_set(2).unwrap(), 1).unwrap();
        assert!(check_pgp_preservation(&zero, &Density::from_ints(&[1, 1]).unwrap()).holds_verdict());
    }
}
