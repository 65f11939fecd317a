//! A fixed collection of submeasures on any finite ring, used for sweeps in
//! tests and by the command line tool.

use crate::choquet::Density;
use crate::error::Result;
use crate::lattice::LatticeValue;
use crate::numeric::{int, ratio, Scalar};
use crate::setring::{FiniteSet, Ring};
use crate::submeasure::{DistortionId, Submeasure};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub submeasure: Submeasure,
}

fn entry(name: &str, submeasure: Submeasure) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        submeasure,
    }
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|x| int(*x)).collect()
}

/// Constant `i + 1` on the `i`-th atom and 0 off the top set; measurable
/// for the ring by construction.
pub fn atom_density(ring: &Ring) -> Result<Density> {
    let mut values = vec![Scalar::from_integer(0.into()); ring.universe_size()];
    for (i, atom) in ring.atoms().iter().enumerate() {
        for t in atom.points() {
            values[t] = int(i as i64 + 1);
        }
    }
    Density::new(values)
}

fn table<F: FnMut(&FiniteSet) -> LatticeValue>(ring: &Ring, dim: usize, f: F) -> Result<Submeasure> {
    Submeasure::table_from_fn(ring.clone(), dim, f)
}

fn card(a: &FiniteSet) -> i64 {
    a.len() as i64
}

/// Every catalog instance on `ring`, in a fixed order.
pub fn catalog(ring: &Ring) -> Result<Vec<CatalogEntry>> {
    let n = ring.universe_size();
    let last = n - 1;
    let points = 0..n;
    let mut out = Vec::new();

    let unit = vec![LatticeValue::from_ints(&[1]); n];
    out.push(entry("additive_unit_d1", Submeasure::additive(ring.clone(), unit)?));
    let ramp = points.clone().map(|t| LatticeValue::from_ints(&[t as i64 + 1, 1])).collect();
    out.push(entry("additive_ramp_d2", Submeasure::additive(ring.clone(), ramp)?));
    let sparse = points
        .clone()
        .map(|t| {
            let mut e = [0; 3];
            e[t % 3] = 1;
            LatticeValue::from_ints(&e)
        })
        .collect();
    out.push(entry("additive_sparse_d3", Submeasure::additive(ring.clone(), sparse)?));
    let zero_first = points
        .clone()
        .map(|t| LatticeValue::from_ints(&[i64::from(t != 0)]))
        .collect();
    out.push(entry("additive_zero_first_d1", Submeasure::additive(ring.clone(), zero_first)?));
    out.push(entry("zero_d1", Submeasure::zero(ring.clone(), 1)?));
    out.push(entry("zero_d2", Submeasure::zero(ring.clone(), 2)?));

    let ones = vec![int(1); n];
    let distorted = |base: Vec<Scalar>, g: DistortionId, dir: &[i64]| Submeasure::distorted(ring.clone(), base, g, ints(dir));
    out.push(entry("sqrt_d1", distorted(ones.clone(), DistortionId::Sqrt, &[1])?));
    let ramp_base = points.clone().map(|t| int(t as i64 + 1)).collect();
    out.push(entry("sqrt_d2", distorted(ramp_base, DistortionId::Sqrt, &[1, 2])?));
    out.push(entry("cap2x_d1", distorted(vec![ratio(1, 4); n], DistortionId::Cap2x, &[1])?));
    let cap_base = points
        .clone()
        .map(|t| if t == 0 { int(0) } else { ratio(1, 3) })
        .collect();
    out.push(entry("cap2x_d3", distorted(cap_base, DistortionId::Cap2x, &[1, 1, 1])?));
    out.push(entry("x_over_1px_d1", distorted(ones.clone(), DistortionId::XOver1px, &[1])?));
    out.push(entry("power_1_3_d1", distorted(ones.clone(), DistortionId::power(1, 3)?, &[1])?));
    out.push(entry("identity_d2", distorted(ones, DistortionId::Identity, &[1, 1])?));

    out.push(entry("card_squared_d1", table(ring, 1, |a| LatticeValue::from_ints(&[card(a) * card(a)]))?));
    out.push(entry(
        "parity_non_monotone_d1",
        table(ring, 1, |a| LatticeValue::from_ints(&[card(a) % 2]))?,
    ));
    out.push(entry("discontinuous_d1", table(ring, 1, |_| LatticeValue::from_ints(&[1]))?));
    out.push(entry(
        "null_jump_d1",
        table(ring, 1, |a| LatticeValue::from_ints(&[i64::from(a.points().any(|t| t != 0))]))?,
    ));
    out.push(entry(
        "with_top_d1",
        table(ring, 1, |a| {
            if a.contains(last) {
                LatticeValue::Top
            } else {
                LatticeValue::from_ints(&[card(a)])
            }
        })?,
    ));
    out.push(entry(
        "max_weight_d1",
        table(ring, 1, |a| LatticeValue::from_ints(&[a.points().map(|t| t as i64 + 1).max().unwrap_or(0)]))?,
    ));
    out.push(entry(
        "vector_card_nonempty_d2",
        table(ring, 2, |a| LatticeValue::from_ints(&[card(a), i64::from(!a.is_empty())]))?,
    ));

    let f = atom_density(ring)?;
    for (name, base) in [
        ("choquet_sqrt_d1", "sqrt_d1"),
        ("choquet_ramp_d2", "additive_ramp_d2"),
        ("choquet_max_weight_d1", "max_weight_d1"),
    ] {
        let b = out.iter().find(|e| e.name == base).expect("base instance").submeasure.clone();
        out.push(entry(name, Submeasure::choquet_derived(b, f.clone())?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setring::enumerate_subrings;
    use crate::submeasure::{classify, SubmeasureClass};

    #[test]
    fn catalog_builds_on_every_small_ring() {
        for n in 1..=3 {
            for ring in enumerate_subrings(n).unwrap() {
                let c = catalog(&ring).unwrap();
                assert!(c.len() >= 20);
                for e in &c {
                    assert_eq!(e.submeasure.domain(), &ring, "{}", e.name);
                }
            }
        }
    }

    #[test]
    fn expected_classes_on_the_power_set() {
        let ring = Ring::power_set(3).unwrap();
        let c = catalog(&ring).unwrap();
        let class = |name: &str| {
            let e = c.iter().find(|e| e.name == name).unwrap();
            classify(&e.submeasure).class
        };
        assert_eq!(class("additive_ramp_d2"), SubmeasureClass::Da);
        assert_eq!(class("zero_d2"), SubmeasureClass::Da);
        assert_eq!(class("identity_d2"), SubmeasureClass::Da);
        assert_eq!(class("sqrt_d1"), SubmeasureClass::Ds);
        assert_eq!(class("max_weight_d1"), SubmeasureClass::Ds);
        assert_eq!(class("parity_non_monotone_d1"), SubmeasureClass::NotD);
        assert_eq!(class("discontinuous_d1"), SubmeasureClass::NotD);
        assert_eq!(class("choquet_ramp_d2"), SubmeasureClass::Da);
    }

    #[test]
    fn atom_density_is_measurable() {
        for ring in enumerate_subrings(3).unwrap() {
            assert!(atom_density(&ring).unwrap().is_measurable(&ring));
        }
    }
}
