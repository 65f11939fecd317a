//! Interval model on `[0, 1)`: finite unions of dyadic half-open intervals,
//! length-distortion rules, and numerical checks of the limit statements
//! that finite rings cannot exercise. Values are binary64.

use std::fmt;
use std::str::FromStr;

use num::integer::Integer;
use num::traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{format_scalar, parse_scalar, to_f64, Scalar};
use crate::report::{PropertyReport, Witness};
use crate::submeasure::DistortionId;

pub const MAX_DEPTH: u32 = 60;

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_DEPTH {
        Err(Error::DepthCap(depth))
    } else {
        Ok(())
    }
}

/// A finite union of intervals `[p/2^k, q/2^k)` inside `[0, 1)`, kept
/// sorted, merged, and at the smallest depth that represents it.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct DyadicSet {
    depth: u32,
    intervals: Vec<(u64, u64)>,
}

impl DyadicSet {
    pub fn empty() -> Self {
        DyadicSet {
            depth: 0,
            intervals: Vec::new(),
        }
    }

    pub fn full() -> Self {
        DyadicSet {
            depth: 0,
            intervals: vec![(0, 1)],
        }
    }

    /// Intervals given by numerators at `depth`; overlaps are merged.
    pub fn new(depth: u32, intervals: Vec<(u64, u64)>) -> Result<Self> {
        check_depth(depth)?;
        let cap = 1u64 << depth;
        if let Some((p, q)) = intervals.iter().find(|(p, q)| p > q || *q > cap) {
            return Err(Error::InvalidRule(format!("interval [{p}, {q}) outside [0, 2^{depth})")));
        }
        Ok(DyadicSet::normalized(depth, intervals))
    }

    /// `[p/2^k, q/2^k)`.
    pub fn interval(depth: u32, p: u64, q: u64) -> Result<Self> {
        DyadicSet::new(depth, vec![(p, q)])
    }

    fn normalized(mut depth: u32, mut iv: Vec<(u64, u64)>) -> Self {
        iv.retain(|(p, q)| p < q);
        iv.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(iv.len());
        for (p, q) in iv {
            match merged.last_mut() {
                Some(last) if p <= last.1 => last.1 = last.1.max(q),
                _ => merged.push((p, q)),
            }
        }
        if merged.is_empty() {
            return DyadicSet::empty();
        }
        while depth > 0 && merged.iter().all(|(p, q)| p % 2 == 0 && q % 2 == 0) {
            for iv in merged.iter_mut() {
                *iv = (iv.0 / 2, iv.1 / 2);
            }
            depth -= 1;
        }
        DyadicSet {
            depth,
            intervals: merged,
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    fn lifted(&self, depth: u32) -> Vec<(u64, u64)> {
        let s = depth - self.depth;
        self.intervals.iter().map(|(p, q)| (p << s, q << s)).collect()
    }

    /// Numerator of the length at [`DyadicSet::depth`].
    pub fn measure_numerator(&self) -> u64 {
        self.intervals.iter().map(|(p, q)| q - p).sum()
    }

    pub fn length(&self) -> f64 {
        self.measure_numerator() as f64 / (1u64 << self.depth) as f64
    }

    pub fn exact_length(&self) -> Scalar {
        Scalar::new(self.measure_numerator().into(), (1u64 << self.depth).into())
    }

    fn combine(&self, other: &DyadicSet, keep: impl Fn(bool, bool) -> bool) -> DyadicSet {
        let depth = self.depth.max(other.depth);
        let a = self.lifted(depth);
        let b = other.lifted(depth);
        let mut cuts: Vec<u64> = a.iter().chain(&b).flat_map(|(p, q)| [*p, *q]).collect();
        cuts.sort_unstable();
        cuts.dedup();
        let inside = |set: &[(u64, u64)], x: u64| set.iter().any(|(p, q)| *p <= x && x < *q);
        let pieces = cuts
            .windows(2)
            .filter(|w| keep(inside(&a, w[0]), inside(&b, w[0])))
            .map(|w| (w[0], w[1]))
            .collect();
        DyadicSet::normalized(depth, pieces)
    }

    pub fn union(&self, other: &DyadicSet) -> DyadicSet {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &DyadicSet) -> DyadicSet {
        self.combine(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &DyadicSet) -> DyadicSet {
        self.combine(other, |x, y| x && !y)
    }

    pub fn symmetric_difference(&self, other: &DyadicSet) -> DyadicSet {
        self.combine(other, |x, y| x != y)
    }

    pub fn is_subset(&self, other: &DyadicSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &DyadicSet) -> bool {
        self.intersection(other).is_empty()
    }
}

impl fmt::Display for DyadicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let den = 1u64 << self.depth;
        for (i, (p, q)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            let show = |x: u64| format_scalar(&Scalar::new(x.into(), den.into()));
            write!(f, "[{}, {})", show(*p), show(*q))?;
        }
        Ok(())
    }
}

impl Serialize for DyadicSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A subset of `[0, 1)` with exactly known length, to be approximated by
/// dyadic sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TargetSet {
    Interval(Scalar, Scalar),
    Union(Vec<(Scalar, Scalar)>),
    /// The `n`-th stage of the middle-thirds construction: `2^n` closed-open
    /// intervals of length `3^{-n}`.
    Cantor(u32),
}

const CANTOR_CAP: u32 = 16;

fn check_interval(a: &Scalar, b: &Scalar) -> Result<()> {
    if *a < Scalar::zero() || a >= b || *b > Scalar::one() {
        return Err(Error::InvalidRule(format!(
            "target interval [{}, {}) must satisfy 0 <= a < b <= 1",
            format_scalar(a),
            format_scalar(b)
        )));
    }
    Ok(())
}

impl TargetSet {
    pub fn interval(a: Scalar, b: Scalar) -> Result<Self> {
        check_interval(&a, &b)?;
        Ok(TargetSet::Interval(a, b))
    }

    /// Pairwise-disjoint intervals (touching is allowed).
    pub fn union(mut parts: Vec<(Scalar, Scalar)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for (a, b) in &parts {
            check_interval(a, b)?;
        }
        parts.sort();
        if parts.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::InvalidRule("union target intervals overlap".into()));
        }
        Ok(TargetSet::Union(parts))
    }

    pub fn cantor(stage: u32) -> Result<Self> {
        if stage > CANTOR_CAP {
            return Err(Error::InvalidRule(format!("cantor stage {stage} > {CANTOR_CAP}")));
        }
        Ok(TargetSet::Cantor(stage))
    }

    /// Sorted, disjoint intervals.
    pub fn parts(&self) -> Vec<(Scalar, Scalar)> {
        match self {
            TargetSet::Interval(a, b) => vec![(a.clone(), b.clone())],
            TargetSet::Union(v) => v.clone(),
            TargetSet::Cantor(n) => {
                let mut parts = vec![(Scalar::zero(), Scalar::one())];
                let third = Scalar::new(1.into(), 3.into());
                for _ in 0..*n {
                    parts = parts
                        .into_iter()
                        .flat_map(|(a, b)| {
                            let w = (&b - &a) * &third;
                            [(a.clone(), &a + &w), (&b - &w, b)]
                        })
                        .collect();
                }
                parts
            }
        }
    }

    pub fn length(&self) -> Scalar {
        self.parts().iter().map(|(a, b)| b - a).sum()
    }
}

impl fmt::Display for TargetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSet::Interval(a, b) => write!(f, "interval {} {}", format_scalar(a), format_scalar(b)),
            TargetSet::Union(parts) => {
                f.write_str("union [")?;
                for (i, (a, b)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{} {}", format_scalar(a), format_scalar(b))?;
                }
                f.write_str("]")
            }
            TargetSet::Cantor(n) => write!(f, "cantor {n}"),
        }
    }
}

impl FromStr for TargetSet {
    type Err = Error;

    /// `interval a b`, `union [a b, c d, …]` or `cantor n`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (kind, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
        let rest = rest.trim();
        let pair = |text: &str| -> Result<(Scalar, Scalar)> {
            let v: Vec<&str> = text.split_whitespace().collect();
            match v.as_slice() {
                [a, b] => Ok((parse_scalar(a)?, parse_scalar(b)?)),
                _ => Err(Error::Parse(format!("expected two endpoints, found {text:?}"))),
            }
        };
        match kind {
            "interval" => {
                let (a, b) = pair(rest)?;
                TargetSet::interval(a, b)
            }
            "union" => {
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("union target must be bracketed: {rest:?}")))?;
                TargetSet::union(inner.split(',').map(pair).collect::<Result<_>>()?)
            }
            "cantor" => {
                let n = rest
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad cantor stage {rest:?}")))?;
                TargetSet::cantor(n)
            }
            _ => Err(Error::Parse(format!("unknown target {t:?}"))),
        }
    }
}

impl Serialize for TargetSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn scaled_floor(x: &Scalar, depth: u32) -> u64 {
    (x * Scalar::from_integer((1u64 << depth).into())).floor().to_integer().to_u64().expect("in [0, 2^depth]")
}

fn scaled_ceil(x: &Scalar, depth: u32) -> u64 {
    (x * Scalar::from_integer((1u64 << depth).into())).ceil().to_integer().to_u64().expect("in [0, 2^depth]")
}

/// The largest dyadic set of depth `k` inside the target.
pub fn inner_refine(target: &TargetSet, depth: u32) -> Result<DyadicSet> {
    check_depth(depth)?;
    let iv = target
        .parts()
        .iter()
        .map(|(a, b)| (scaled_ceil(a, depth), scaled_floor(b, depth)))
        .collect();
    Ok(DyadicSet::normalized(depth, iv))
}

/// The smallest dyadic set of depth `k` containing the target.
pub fn outer_refine(target: &TargetSet, depth: u32) -> Result<DyadicSet> {
    check_depth(depth)?;
    let iv = target
        .parts()
        .iter()
        .map(|(a, b)| (scaled_floor(a, depth), scaled_ceil(b, depth)))
        .collect();
    Ok(DyadicSet::normalized(depth, iv))
}

/// `μ(A)_i = scale · g_i(len A)`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct IntervalRule {
    pub distortions: Vec<DistortionId>,
    pub scale: f64,
}

impl IntervalRule {
    pub fn new(distortions: Vec<DistortionId>) -> Result<Self> {
        if distortions.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(IntervalRule { distortions, scale: 1.0 })
    }

    /// The rule that is identically zero.
    pub fn zero(dim: usize) -> Result<Self> {
        Ok(IntervalRule {
            scale: 0.0,
            ..IntervalRule::new(vec![DistortionId::Identity; dim])?
        })
    }

    pub fn dim(&self) -> usize {
        self.distortions.len()
    }

    /// Value at a given total length.
    pub fn at_length(&self, len: f64) -> Vec<f64> {
        self.distortions.iter().map(|g| self.scale * g.apply_f64(len)).collect()
    }

    pub fn norm_at_length(&self, len: f64) -> f64 {
        self.at_length(len).iter().sum()
    }

    pub fn evaluate(&self, a: &DyadicSet) -> Vec<f64> {
        self.at_length(a.length())
    }

    pub fn norm(&self, a: &DyadicSet) -> f64 {
        self.norm_at_length(a.length())
    }
}

/// Sequences of dyadic sets indexed from 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SequenceFamily {
    /// `A_n = [0, 2^{-n})`, decreasing to ∅.
    ShrinkingPrefix,
    /// `A_n = [2^{-(n+1)}, 2^{-n})`, pairwise disjoint.
    DisjointDyadic,
    /// `A_n = inner_refine(target, n)`, increasing to the target.
    InnerRefinement(TargetSet),
    Constant(DyadicSet),
}

impl SequenceFamily {
    pub fn member(&self, n: u32) -> Result<DyadicSet> {
        match self {
            SequenceFamily::ShrinkingPrefix => DyadicSet::interval(n, 0, 1),
            SequenceFamily::DisjointDyadic => {
                check_depth(n + 1)?;
                DyadicSet::interval(n + 1, 1, 2)
            }
            SequenceFamily::InnerRefinement(t) => inner_refine(t, n),
            SequenceFamily::Constant(s) => Ok(s.clone()),
        }
    }

    pub fn decreases_to_empty(&self) -> bool {
        matches!(self, SequenceFamily::ShrinkingPrefix)
    }

    pub fn pairwise_disjoint(&self) -> bool {
        matches!(self, SequenceFamily::DisjointDyadic)
    }

    pub fn increasing(&self) -> bool {
        matches!(self, SequenceFamily::InnerRefinement(_) | SequenceFamily::Constant(_))
    }

    /// Exact length of the limit set of an increasing family.
    pub fn limit_length(&self) -> Option<Scalar> {
        match self {
            SequenceFamily::InnerRefinement(t) => Some(t.length()),
            SequenceFamily::Constant(s) => Some(s.exact_length()),
            _ => None,
        }
    }
}

impl fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceFamily::ShrinkingPrefix => f.write_str("[0, 2^-n)"),
            SequenceFamily::DisjointDyadic => f.write_str("[2^-(n+1), 2^-n)"),
            SequenceFamily::InnerRefinement(t) => write!(f, "inner refinements of {t}"),
            SequenceFamily::Constant(s) => write!(f, "constant {s}"),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TracePoint {
    pub index: u32,
    pub value: f64,
    pub residual: f64,
}

/// A numerical check: the report, the first index meeting the tolerance, and
/// the sequence it was read from.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SequenceCheck {
    pub report: PropertyReport,
    pub first_index: Option<u32>,
    pub trace: Vec<TracePoint>,
}

fn note_failure(name: &str, detail: String) -> PropertyReport {
    PropertyReport::fails(name, Witness::new(Vec::new(), Vec::new(), detail))
}

fn vacuous(name: &str, reason: impl Into<String>) -> SequenceCheck {
    SequenceCheck {
        report: PropertyReport::vacuous(name, reason),
        first_index: None,
        trace: Vec::new(),
    }
}

/// Traces `|‖μ(A_n)‖ − target|` and finds the first `n` from which it stays
/// within `tol` through `n_max`.
fn converge(
    name: &str,
    rule: &IntervalRule,
    family: &SequenceFamily,
    target: f64,
    tol: f64,
    n_max: u32,
) -> Result<SequenceCheck> {
    let mut trace = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let value = rule.norm(&family.member(n)?);
        trace.push(TracePoint {
            index: n,
            value,
            residual: (value - target).abs(),
        });
    }
    let first_index = (0..trace.len())
        .find(|&i| trace[i..].iter().all(|p| p.residual <= tol))
        .map(|i| trace[i].index);
    let last = trace.last().map(|p| p.residual).unwrap_or(f64::INFINITY);
    let report = match first_index {
        Some(n) => PropertyReport::holds(name).with_note(format!(
            "within {tol:e} of {target} from n = {n} (family {family})"
        )),
        None => note_failure(
            name,
            format!("not within {tol:e} of {target} by n = {n_max}; residual {last:e}"),
        ),
    };
    Ok(SequenceCheck {
        report,
        first_index,
        trace,
    })
}

/// `‖μ(B_k)‖ → Σ_i g_i(len A)` for the inner refinements `B_k` of `A`.
pub fn check_inner_convergence(rule: &IntervalRule, target: &TargetSet, tol: f64, max_depth: u32) -> Result<SequenceCheck> {
    check_depth(max_depth)?;
    let limit = rule.norm_at_length(to_f64(&target.length()));
    converge(
        "inner_convergence",
        rule,
        &SequenceFamily::InnerRefinement(target.clone()),
        limit,
        tol,
        max_depth,
    )
}

/// `‖μ(A_n)‖ → 0` along a family decreasing to ∅, with a monotone
/// decrease along the way.
pub fn check_continuity_sequence(rule: &IntervalRule, family: &SequenceFamily, n_max: u32, tol: f64) -> Result<SequenceCheck> {
    const NAME: &str = "continuity_sequence";
    if !family.decreases_to_empty() {
        return Ok(vacuous(NAME, format!("family {family} is not known to decrease to the empty set")));
    }
    let mut check = converge(NAME, rule, family, 0.0, tol, n_max)?;
    if let Some(w) = check.trace.windows(2).find(|w| w[1].value > w[0].value) {
        check.report = note_failure(NAME, format!("norm increases from n = {} to n = {}", w[0].index, w[1].index));
    }
    Ok(check)
}

/// `‖μ(A_n)‖ → 0` along a pairwise-disjoint family.
pub fn check_exhaustive_sequence(rule: &IntervalRule, family: &SequenceFamily, n_max: u32, tol: f64) -> Result<SequenceCheck> {
    const NAME: &str = "exhaustive_sequence";
    if !family.pairwise_disjoint() {
        return Ok(vacuous(NAME, format!("family {family} is not known to be pairwise disjoint")));
    }
    converge(NAME, rule, family, 0.0, tol, n_max)
}

/// An increasing family is μ-Cauchy: `‖μ(A_n Δ A_m)‖ ≤ tol` for all
/// `n, m ≥ N`, for some `N ≤ n_max`. The successive differences
/// `A_{n+1} ∖ A_n` form a disjoint sequence whose norms must also vanish;
/// both verdicts are reported.
pub fn check_mu_cauchy(rule: &IntervalRule, family: &SequenceFamily, n_max: u32, tol: f64) -> Result<SequenceCheck> {
    const NAME: &str = "mu_cauchy";
    if !family.increasing() {
        return Ok(vacuous(NAME, format!("family {family} is not known to be increasing")));
    }
    let members = (1..=n_max).map(|n| family.member(n)).collect::<Result<Vec<_>>>()?;
    // tail[i] = max over i ≤ n < m of ‖μ(A_n Δ A_m)‖
    let mut tail = vec![0.0f64; members.len() + 1];
    for i in (0..members.len()).rev() {
        let row = members[i + 1..]
            .iter()
            .map(|m| rule.norm(&members[i].symmetric_difference(m)))
            .fold(0.0, f64::max);
        tail[i] = tail[i + 1].max(row);
    }
    let trace: Vec<TracePoint> = (0..members.len())
        .map(|i| TracePoint {
            index: i as u32 + 1,
            value: tail[i],
            residual: tail[i],
        })
        .collect();
    let first_index = trace.iter().find(|p| p.residual <= tol).map(|p| p.index);
    let diffs_vanish = {
        let gaps: Vec<f64> = members
            .windows(2)
            .map(|w| rule.norm(&w[1].difference(&w[0])))
            .collect();
        (0..gaps.len()).any(|i| gaps[i..].iter().all(|g| *g <= tol)) || gaps.is_empty()
    };
    let mut report = match first_index {
        Some(n) => PropertyReport::holds(NAME).with_note(format!("sup of norm(mu(A_n delta A_m)) over n, m >= {n} is within {tol:e}")),
        None => note_failure(NAME, format!("tail oscillation {:e} exceeds {tol:e} at n = {n_max}", tail[members.len().saturating_sub(1)])),
    };
    report = report.with_note(format!(
        "successive differences A_(n+1) \\ A_n {} within tolerance",
        if diffs_vanish { "eventually stay" } else { "do not stay" }
    ));
    if diffs_vanish != first_index.is_some() {
        report = note_failure(NAME, "Cauchy verdict disagrees with the vanishing of the disjoint differences".into());
    }
    Ok(SequenceCheck {
        report,
        first_index,
        trace,
    })
}

/// `‖μ(A)‖ = lim ‖μ(A_n)‖` for an increasing family with limit `A`.
pub fn check_increasing_limit(rule: &IntervalRule, family: &SequenceFamily, n_max: u32, tol: f64) -> Result<SequenceCheck> {
    const NAME: &str = "increasing_limit";
    let Some(len) = family.limit_length() else {
        return Ok(vacuous(NAME, format!("family {family} has no known increasing limit")));
    };
    converge(NAME, rule, family, rule.norm_at_length(to_f64(&len)), tol, n_max)
}

/// `‖μ(A ∪ B)‖ ≤ ‖μ(A)‖ + ‖μ(B)‖ (+ tol)` on random dyadic pairs.
pub fn check_sampled_subadditivity(rule: &IntervalRule, samples: usize, depth: u32, seed: u64, tol: f64) -> Result<PropertyReport> {
    check_depth(depth)?;
    const NAME: &str = "sampled_subadditivity";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = 1u64 << depth;
    let random_set = |rng: &mut ChaCha8Rng| {
        let pieces = rng.gen_range(1..=3);
        let iv = (0..pieces)
            .map(|_| {
                let p = rng.gen_range(0..cap);
                let q = rng.gen_range(p + 1..=cap);
                (p, q)
            })
            .collect();
        DyadicSet::normalized(depth, iv)
    };
    for _ in 0..samples {
        let a = random_set(&mut rng);
        let b = random_set(&mut rng);
        let lhs = rule.norm(&a.union(&b));
        let rhs = rule.norm(&a) + rule.norm(&b);
        if lhs > rhs + tol {
            return Ok(note_failure(NAME, format!("{a} and {b}: {lhs} > {rhs}")));
        }
    }
    Ok(PropertyReport::holds(NAME).with_note(format!("{samples} random pairs at depth {depth}, seed {seed}")))
}

/// Gcd-free numerator/denominator view of a dyadic rational, for display.
pub fn dyadic_ratio(numerator: u64, depth: u32) -> (u64, u64) {
    let den = 1u64 << depth;
    let g = numerator.gcd(&den);
    (numerator / g, den / g)
}
