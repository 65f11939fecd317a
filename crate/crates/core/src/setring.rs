//! Finite universes, subsets as bitmasks, set classes and rings of sets.
//!
//! Every set lives in a universe `{0, …, n−1}` with `n ≤ 64` and is stored as
//! a `u64` bitmask. Set classes are kept sorted by bitmask so iteration order,
//! and hence every witness reported by the checkers, is reproducible.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest universe representable by a bitmask.
pub const MAX_UNIVERSE: usize = 64;

/// Largest universe accepted by [`enumerate_subrings`].
pub const ENUMERATION_CAP: usize = 4;

fn full_mask(universe_size: usize) -> u64 {
    if universe_size >= 64 {
        u64::MAX
    } else {
        (1u64 << universe_size) - 1
    }
}

fn check_universe(universe_size: usize) -> Result<()> {
    if universe_size == 0 {
        return Err(Error::EmptyUniverse);
    }
    if universe_size > MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(universe_size));
    }
    Ok(())
}

/// A subset of the universe `{0, …, universe_size − 1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    universe: u8,
    bits: u64,
}

impl FiniteSet {
    pub fn empty(universe_size: usize) -> Result<Self> {
        check_universe(universe_size)?;
        Ok(FiniteSet {
            universe: universe_size as u8,
            bits: 0,
        })
    }

    pub fn full(universe_size: usize) -> Result<Self> {
        check_universe(universe_size)?;
        Ok(FiniteSet {
            universe: universe_size as u8,
            bits: full_mask(universe_size),
        })
    }

    pub fn from_bits(universe_size: usize, bits: u64) -> Result<Self> {
        check_universe(universe_size)?;
        let stray = bits & !full_mask(universe_size);
        if stray != 0 {
            return Err(Error::PointOutOfRange {
                point: stray.trailing_zeros() as usize,
                universe: universe_size,
            });
        }
        Ok(FiniteSet {
            universe: universe_size as u8,
            bits,
        })
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(universe_size: usize, points: I) -> Result<Self> {
        check_universe(universe_size)?;
        let mut bits = 0u64;
        for p in points {
            if p >= universe_size {
                return Err(Error::PointOutOfRange {
                    point: p,
                    universe: universe_size,
                });
            }
            bits |= 1 << p;
        }
        Ok(FiniteSet {
            universe: universe_size as u8,
            bits,
        })
    }

    /// Internal constructor for masks already known to be in range.
    pub(crate) fn raw(universe_size: usize, bits: u64) -> Self {
        debug_assert!(bits & !full_mask(universe_size) == 0);
        FiniteSet {
            universe: universe_size as u8,
            bits,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, point: usize) -> bool {
        point < 64 && self.bits & (1 << point) != 0
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.bits;
        (0..self.universe as usize).filter(move |p| bits & (1 << p) != 0)
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &FiniteSet) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        self.with_bits(self.bits | other.bits)
    }

    pub fn intersection(&self, other: &FiniteSet) -> FiniteSet {
        self.with_bits(self.bits & other.bits)
    }

    pub fn difference(&self, other: &FiniteSet) -> FiniteSet {
        self.with_bits(self.bits & !other.bits)
    }

    pub fn symmetric_difference(&self, other: &FiniteSet) -> FiniteSet {
        self.with_bits(self.bits ^ other.bits)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(&self) -> Vec<FiniteSet> {
        let mut out = Vec::with_capacity(1 << self.len().min(20));
        let mut sub = 0u64;
        loop {
            out.push(self.with_bits(sub));
            if sub == self.bits {
                break;
            }
            sub = (sub.wrapping_sub(self.bits)) & self.bits;
        }
        out
    }

    fn with_bits(&self, bits: u64) -> FiniteSet {
        debug_assert!(self.universe > 0);
        FiniteSet {
            universe: self.universe,
            bits,
        }
    }
}

impl PartialOrd for FiniteSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.bits, self.universe).cmp(&(other.bits, other.universe))
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses a set literal such as `{0,2}` or `{}`. The universe size must be
/// supplied separately since the literal does not carry it.
pub fn parse_set(universe_size: usize, text: &str) -> Result<FiniteSet> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("set literal must be braced: {t:?}")))?;
    let mut points = Vec::new();
    for tok in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let p = usize::from_str(tok).map_err(|_| Error::Parse(format!("bad point {tok:?} in {t:?}")))?;
        points.push(p);
    }
    FiniteSet::from_points(universe_size, points)
}

/// Binary operations applied elementwise to pairs of classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassOp {
    Intersection,
    Union,
    SymmetricDifference,
}

impl ClassOp {
    pub fn apply(&self, a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
        match self {
            ClassOp::Intersection => a.intersection(b),
            ClassOp::Union => a.union(b),
            ClassOp::SymmetricDifference => a.symmetric_difference(b),
        }
    }
}

/// A finite, duplicate-free family of subsets of one universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetClass {
    universe: usize,
    sets: Vec<FiniteSet>,
}

impl SetClass {
    pub fn new<I: IntoIterator<Item = FiniteSet>>(universe_size: usize, sets: I) -> Result<Self> {
        check_universe(universe_size)?;
        let mut v: Vec<FiniteSet> = Vec::new();
        for s in sets {
            if s.universe_size() != universe_size {
                return Err(Error::UniverseMismatch {
                    left: universe_size,
                    right: s.universe_size(),
                });
            }
            v.push(s);
        }
        v.sort();
        v.dedup();
        Ok(SetClass {
            universe: universe_size,
            sets: v,
        })
    }

    pub fn empty(universe_size: usize) -> Result<Self> {
        SetClass::new(universe_size, std::iter::empty())
    }

    pub(crate) fn from_sorted_bits(universe_size: usize, bits: impl IntoIterator<Item = u64>) -> Self {
        let sets: Vec<FiniteSet> = bits.into_iter().map(|b| FiniteSet::raw(universe_size, b)).collect();
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        SetClass {
            universe: universe_size,
            sets,
        }
    }

    /// The full power set of the universe.
    pub fn power_set(universe_size: usize) -> Result<Self> {
        let full = FiniteSet::full(universe_size)?;
        Ok(SetClass {
            universe: universe_size,
            sets: full.subsets(),
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[FiniteSet] {
        &self.sets
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FiniteSet> {
        self.sets.iter()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: &FiniteSet) -> bool {
        self.index_of(s).is_some()
    }

    pub fn index_of(&self, s: &FiniteSet) -> Option<usize> {
        if s.universe_size() != self.universe {
            return None;
        }
        self.sets.binary_search(s).ok()
    }

    pub fn is_subclass_of(&self, other: &SetClass) -> bool {
        self.sets.iter().all(|s| other.contains(s))
    }

    /// Union of all members.
    pub fn union_all(&self) -> FiniteSet {
        let bits = self.sets.iter().fold(0, |acc, s| acc | s.bits());
        FiniteSet::raw(self.universe, bits)
    }

    /// Members `B` with `B ⊆ a`.
    pub fn subsets_of<'a>(&'a self, a: &'a FiniteSet) -> impl Iterator<Item = &'a FiniteSet> + 'a {
        self.sets.iter().filter(move |b| b.is_subset(a))
    }

    /// Members `B` with `a ⊆ B`.
    pub fn supersets_of<'a>(&'a self, a: &'a FiniteSet) -> impl Iterator<Item = &'a FiniteSet> + 'a {
        self.sets.iter().filter(move |b| a.is_subset(b))
    }

    /// The first pair violating closure under Δ or ∩, if any.
    pub fn ring_violation(&self) -> Option<String> {
        if !self.sets.iter().any(FiniteSet::is_empty) {
            return Some("empty set is not a member".into());
        }
        for a in &self.sets {
            for b in &self.sets {
                let d = a.symmetric_difference(b);
                if !self.contains(&d) {
                    return Some(format!("{a} Δ {b} = {d} is not a member"));
                }
                let i = a.intersection(b);
                if !self.contains(&i) {
                    return Some(format!("{a} ∩ {b} = {i} is not a member"));
                }
            }
        }
        None
    }

    /// Whether the class is closed under symmetric difference.
    pub fn is_delta_closed(&self) -> bool {
        self.sets
            .iter()
            .all(|a| self.sets.iter().all(|b| self.contains(&a.symmetric_difference(b))))
    }
}

impl fmt::Display for SetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetClass[{}]{}", self.universe, self)
    }
}

impl Serialize for SetClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.sets.iter())
    }
}

impl<'a> IntoIterator for &'a SetClass {
    type Item = &'a FiniteSet;
    type IntoIter = std::slice::Iter<'a, FiniteSet>;
    fn into_iter(self) -> Self::IntoIter {
        self.sets.iter()
    }
}

/// A set class closed under Δ and ∩ (hence under ∪ and ∖) containing ∅.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    base: SetClass,
}

impl Ring {
    /// Verifies the ring invariants.
    pub fn from_class(base: SetClass) -> Result<Self> {
        match base.ring_violation() {
            Some(v) => Err(Error::NotARing(v)),
            None => Ok(Ring { base }),
        }
    }

    pub(crate) fn from_class_unchecked(base: SetClass) -> Self {
        debug_assert!(base.ring_violation().is_none());
        Ring { base }
    }

    /// The full power set of the universe.
    pub fn power_set(universe_size: usize) -> Result<Self> {
        Ok(Ring {
            base: SetClass::power_set(universe_size)?,
        })
    }

    /// Builds the ring whose members are exactly the unions of `atoms`.
    /// The atoms must be nonempty and pairwise disjoint.
    pub fn from_atoms(universe_size: usize, atoms: &[FiniteSet]) -> Result<Self> {
        check_universe(universe_size)?;
        for (i, a) in atoms.iter().enumerate() {
            if a.is_empty() || atoms[..i].iter().any(|b| !a.is_disjoint(b)) {
                return Err(Error::NotARing(format!("atom {a} is empty or overlaps another atom")));
            }
        }
        let mut bits: Vec<u64> = (0u64..1 << atoms.len())
            .map(|sel| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sel & (1 << i) != 0)
                    .fold(0, |acc, (_, a)| acc | a.bits())
            })
            .collect();
        bits.sort_unstable();
        Ok(Ring {
            base: SetClass::from_sorted_bits(universe_size, bits),
        })
    }

    pub fn class(&self) -> &SetClass {
        &self.base
    }

    pub fn into_class(self) -> SetClass {
        self.base
    }

    pub fn universe_size(&self) -> usize {
        self.base.universe
    }

    pub fn sets(&self) -> &[FiniteSet] {
        &self.base.sets
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FiniteSet> {
        self.base.iter()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn contains(&self, s: &FiniteSet) -> bool {
        self.base.contains(s)
    }

    pub fn index_of(&self, s: &FiniteSet) -> Option<usize> {
        self.base.index_of(s)
    }

    pub fn empty_set(&self) -> FiniteSet {
        FiniteSet::raw(self.base.universe, 0)
    }

    /// Largest member (the union of all members, which a ring contains).
    pub fn top_set(&self) -> FiniteSet {
        self.base.union_all()
    }

    /// The minimal nonempty members. They partition [`Ring::top_set`] and
    /// every member is a union of them.
    pub fn atoms(&self) -> Vec<FiniteSet> {
        self.sets()
            .iter()
            .filter(|a| !a.is_empty())
            .filter(|a| {
                !self
                    .sets()
                    .iter()
                    .any(|b| !b.is_empty() && b != *a && b.is_subset(a))
            })
            .copied()
            .collect()
    }

    pub fn is_subring_of(&self, other: &Ring) -> bool {
        self.base.is_subclass_of(&other.base)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.base, f)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[{}]{}", self.base.universe, self.base)
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.base.serialize(s)
    }
}

impl<'a> IntoIterator for &'a Ring {
    type Item = &'a FiniteSet;
    type IntoIter = std::slice::Iter<'a, FiniteSet>;
    fn into_iter(self) -> Self::IntoIter {
        self.base.iter()
    }
}

/// The smallest ring containing `generators`.
///
/// Points of the generators' union are grouped by the set of generators that
/// contain them; those groups are the atoms of the generated ring, which is
/// then the family of all unions of atoms.
pub fn generate_ring(universe_size: usize, generators: &SetClass) -> Result<Ring> {
    check_universe(universe_size)?;
    if generators.universe_size() != universe_size {
        return Err(Error::UniverseMismatch {
            left: universe_size,
            right: generators.universe_size(),
        });
    }
    let support = generators.union_all();
    let mut cells: Vec<(Vec<bool>, u64)> = Vec::new();
    for p in support.points() {
        let signature: Vec<bool> = generators.iter().map(|g| g.contains(p)).collect();
        match cells.iter_mut().find(|(sig, _)| *sig == signature) {
            Some((_, bits)) => *bits |= 1 << p,
            None => cells.push((signature, 1 << p)),
        }
    }
    let atoms: Vec<FiniteSet> = cells
        .into_iter()
        .map(|(_, bits)| FiniteSet::raw(universe_size, bits))
        .collect();
    Ring::from_atoms(universe_size, &atoms)
}

/// R_σ on a finite universe: every increasing sequence of members is
/// eventually constant, so the class of increasing limits is the ring itself.
pub fn r_sigma(ring: &Ring) -> Ring {
    ring.clone()
}

/// R* = every subset of a member of R_σ. Since a ring contains the union of
/// its members, this is the power set of [`Ring::top_set`].
pub fn hereditary_class(ring: &Ring) -> Ring {
    let top = r_sigma(ring).top_set();
    Ring::from_class_unchecked(SetClass {
        universe: ring.universe_size(),
        sets: top.subsets(),
    })
}

/// Elementwise product family `{a op b : a ∈ A, b ∈ B}`.
pub fn class_op(a: &SetClass, b: &SetClass, op: ClassOp) -> Result<SetClass> {
    if a.universe_size() != b.universe_size() {
        return Err(Error::UniverseMismatch {
            left: a.universe_size(),
            right: b.universe_size(),
        });
    }
    let out: BTreeSet<FiniteSet> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| op.apply(x, y)))
        .collect();
    SetClass::new(a.universe_size(), out)
}

/// Every ring of subsets of `{0, …, universe_size − 1}`.
///
/// A ring is determined by its atoms, which form a partition of the ring's
/// largest member; the enumeration runs over subsets of the universe and the
/// set partitions of each.
pub fn enumerate_subrings(universe_size: usize) -> Result<Vec<Ring>> {
    check_universe(universe_size)?;
    if universe_size > ENUMERATION_CAP {
        return Err(Error::EnumerationBound(universe_size));
    }
    let mut rings = Vec::new();
    for support in FiniteSet::full(universe_size)?.subsets() {
        for blocks in set_partitions(support.bits()) {
            let atoms: Vec<FiniteSet> = blocks
                .into_iter()
                .map(|b| FiniteSet::raw(universe_size, b))
                .collect();
            let ring = Ring::from_atoms(universe_size, &atoms)?;
            debug_assert!(ring.class().ring_violation().is_none());
            rings.push(ring);
        }
    }
    rings.sort_by(|a, b| (a.len(), a.sets()).cmp(&(b.len(), b.sets())));
    Ok(rings)
}

fn set_partitions(mask: u64) -> Vec<Vec<u64>> {
    if mask == 0 {
        return vec![Vec::new()];
    }
    let lowest = mask & mask.wrapping_neg();
    let rest = mask & !lowest;
    let mut out = Vec::new();
    // Block containing the lowest point: lowest ∪ any subset of the rest.
    let mut sub = 0u64;
    loop {
        let block = lowest | sub;
        for mut tail in set_partitions(rest & !sub) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == rest {
            break;
        }
        sub = (sub.wrapping_sub(rest)) & rest;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, pts: &[usize]) -> FiniteSet {
        FiniteSet::from_points(n, pts.iter().copied()).unwrap()
    }

    fn class(n: usize, sets: &[&[usize]]) -> SetClass {
        SetClass::new(n, sets.iter().map(|s| set(n, s))).unwrap()
    }

    /// Closure by repeated Δ/∩ until nothing new appears.
    fn fixpoint_closure(n: usize, gens: &SetClass) -> SetClass {
        let mut all: BTreeSet<FiniteSet> = gens.iter().copied().collect();
        all.insert(FiniteSet::empty(n).unwrap());
        loop {
            let snapshot: Vec<FiniteSet> = all.iter().copied().collect();
            let before = all.len();
            for a in &snapshot {
                for b in &snapshot {
                    all.insert(a.symmetric_difference(b));
                    all.insert(a.intersection(b));
                }
            }
            if all.len() == before {
                return SetClass::new(n, all).unwrap();
            }
        }
    }

    #[test]
    fn generate_ring_examples() {
        let r = generate_ring(2, &class(2, &[&[0]])).unwrap();
        assert_eq!(r.class(), &class(2, &[&[], &[0]]));

        let r = generate_ring(2, &class(2, &[&[0], &[1]])).unwrap();
        assert_eq!(r.class(), &class(2, &[&[], &[0], &[1], &[0, 1]]));

        let r = generate_ring(3, &SetClass::empty(3).unwrap()).unwrap();
        assert_eq!(r.class(), &class(3, &[&[]]));
    }

    #[test]
    fn generate_ring_errors() {
        assert_eq!(
            generate_ring(0, &SetClass::empty(1).unwrap()),
            Err(Error::EmptyUniverse)
        );
        assert!(matches!(
            FiniteSet::from_points(2, [3]),
            Err(Error::PointOutOfRange { point: 3, universe: 2 })
        ));
        assert!(FiniteSet::from_bits(2, 0b100).is_err());
    }

    #[test]
    fn generate_ring_matches_fixpoint_on_all_small_families() {
        for n in 1..=3usize {
            let power = SetClass::power_set(n).unwrap();
            let p = power.len();
            for sel in 0u64..(1 << p) {
                let gens = SetClass::new(
                    n,
                    power.iter().enumerate().filter(|(i, _)| sel & (1 << i) != 0).map(|(_, s)| *s),
                )
                .unwrap();
                let ring = generate_ring(n, &gens).unwrap();
                assert_eq!(ring.class(), &fixpoint_closure(n, &gens), "generators {gens}");
            }
        }
    }

    #[test]
    fn hereditary_class_examples() {
        let r = Ring::from_class(class(2, &[&[], &[0, 1]])).unwrap();
        assert_eq!(hereditary_class(&r).class(), &class(2, &[&[], &[0], &[1], &[0, 1]]));

        let r = Ring::from_class(class(2, &[&[]])).unwrap();
        assert_eq!(hereditary_class(&r).class(), &class(2, &[&[]]));

        let p = Ring::power_set(3).unwrap();
        assert_eq!(hereditary_class(&p), p);
    }

    #[test]
    fn hereditary_class_is_enumerated_subsets() {
        for n in 1..=3 {
            for ring in enumerate_subrings(n).unwrap() {
                let expected: BTreeSet<FiniteSet> = ring.iter().flat_map(|s| s.subsets()).collect();
                let h = hereditary_class(&ring);
                assert_eq!(h.sets().to_vec(), expected.into_iter().collect::<Vec<_>>());
                assert!(h.class().ring_violation().is_none());
                for a in h.iter() {
                    for b in a.subsets() {
                        assert!(h.contains(&b));
                    }
                }
            }
        }
    }

    #[test]
    fn class_op_examples() {
        let u = class_op(&class(3, &[&[0]]), &class(3, &[&[1]]), ClassOp::Union).unwrap();
        assert_eq!(u, class(3, &[&[0, 1]]));

        let a = class(3, &[&[], &[0]]);
        let d = class_op(&a, &a, ClassOp::SymmetricDifference).unwrap();
        assert_eq!(d, class(3, &[&[], &[0]]));

        let i = class_op(&class(3, &[&[0, 1]]), &class(3, &[&[1, 2]]), ClassOp::Intersection).unwrap();
        assert_eq!(i, class(3, &[&[1]]));

        let err = class_op(&class(2, &[&[0]]), &class(3, &[&[0]]), ClassOp::Union);
        assert!(matches!(err, Err(Error::UniverseMismatch { .. })));
    }

    fn brute_force_rings(n: usize) -> Vec<SetClass> {
        let power = SetClass::power_set(n).unwrap();
        let p = power.len();
        (0u64..(1 << p))
            .map(|sel| {
                SetClass::new(
                    n,
                    power.iter().enumerate().filter(|(i, _)| sel & (1 << i) != 0).map(|(_, s)| *s),
                )
                .unwrap()
            })
            .filter(|c| c.ring_violation().is_none())
            .collect()
    }

    #[test]
    fn enumerate_subrings_matches_brute_force() {
        for n in 1..=4 {
            let mut got: Vec<SetClass> = enumerate_subrings(n).unwrap().into_iter().map(Ring::into_class).collect();
            let mut want = brute_force_rings(n);
            got.sort_by(|a, b| a.sets().cmp(b.sets()));
            want.sort_by(|a, b| a.sets().cmp(b.sets()));
            assert_eq!(got, want, "universe {n}");
        }
    }

    #[test]
    fn enumerate_subrings_examples() {
        let r1: Vec<SetClass> = enumerate_subrings(1).unwrap().into_iter().map(Ring::into_class).collect();
        assert_eq!(r1, vec![class(1, &[&[]]), class(1, &[&[], &[0]])]);

        for n in 1..=4 {
            let rings = enumerate_subrings(n).unwrap();
            assert!(rings.iter().any(|r| r.len() == 1 && r.sets()[0].is_empty()));
        }

        let r2 = enumerate_subrings(2).unwrap();
        assert!(r2.iter().any(|r| r.class() == &class(2, &[&[], &[0], &[1], &[0, 1]])));
        assert!(r2.iter().any(|r| r.class() == &class(2, &[&[], &[0, 1]])));

        assert_eq!(enumerate_subrings(5), Err(Error::EnumerationBound(5)));
    }

    #[test]
    fn closure_audit_on_all_enumerated_rings() {
        for n in 1..=4 {
            for ring in enumerate_subrings(n).unwrap() {
                for a in ring.iter() {
                    for b in ring.iter() {
                        for c in [
                            a.symmetric_difference(b),
                            a.intersection(b),
                            a.union(b),
                            a.difference(b),
                        ] {
                            assert!(ring.contains(&c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn atoms_partition_top_set() {
        for ring in enumerate_subrings(4).unwrap() {
            let atoms = ring.atoms();
            let rebuilt = Ring::from_atoms(4, &atoms).unwrap();
            assert_eq!(rebuilt, ring);
        }
    }

    #[test]
    fn set_literals() {
        assert_eq!(parse_set(3, "{0, 2}").unwrap(), set(3, &[0, 2]));
        assert_eq!(parse_set(3, "{}").unwrap(), set(3, &[]));
        assert!(parse_set(3, "0,2").is_err());
        assert!(parse_set(3, "{5}").is_err());
        assert_eq!(set(3, &[0, 2]).to_string(), "{0,2}");
    }

    #[test]
    fn ring_rejects_non_closed_class() {
        let err = Ring::from_class(class(2, &[&[], &[0], &[1]])).unwrap_err();
        assert!(matches!(err, Error::NotARing(_)));
        let err = Ring::from_class(class(2, &[&[0]])).unwrap_err();
        assert!(matches!(err, Error::NotARing(_)));
    }
}
