//! Instance files: `[section]` headers followed by `key = value` lines.
//! Lists are separated by `;`. `#` starts a comment.
//!
//! ```text
//! [model]
//! kind = finite
//! universe = 3
//! dim = 1
//!
//! [ring]
//! atoms = {0}; {1,2}
//!
//! [rule]
//! kind = additive
//! weights = (1); (0); (0)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use dsub_core::choquet::Density;
use dsub_core::dyadic::{IntervalRule, TargetSet};
use dsub_core::lattice::{parse_value, LatticeValue};
use dsub_core::numeric::{format_scalar, parse_scalar, Scalar};
use dsub_core::setring::{generate_ring, parse_set, FiniteSet, Ring, SetClass};
use dsub_core::submeasure::{DistortionId, Submeasure};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub model: Model,
    pub density: Option<Density>,
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Finite(FiniteModel),
    Dyadic(DyadicModel),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteModel {
    pub universe: usize,
    pub dim: usize,
    pub ring: RingSpec,
    pub rule: FiniteRule,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RingSpec {
    PowerSet,
    Atoms(Vec<FiniteSet>),
    Generators(Vec<FiniteSet>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiniteRule {
    Additive(Vec<LatticeValue>),
    Distorted {
        base: Vec<Scalar>,
        distortion: DistortionId,
        direction: Vec<Scalar>,
    },
    Table(BTreeMap<FiniteSet, LatticeValue>),
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicModel {
    pub distortions: Vec<DistortionId>,
    pub scale: f64,
    pub targets: Vec<TargetSet>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Options {
    pub eps_grid: Vec<Scalar>,
    pub tol: Option<f64>,
    pub max_depth: Option<u32>,
    pub seed: Option<u64>,
    pub max_cover: Option<usize>,
    pub samples: Option<usize>,
}

impl InstanceSpec {
    pub fn is_finite(&self) -> bool {
        matches!(self.model, Model::Finite(_))
    }

    pub fn finite(&self) -> Option<&FiniteModel> {
        match &self.model {
            Model::Finite(m) => Some(m),
            Model::Dyadic(_) => None,
        }
    }
}

impl FiniteModel {
    pub fn ring(&self) -> CliResult<Ring> {
        Ok(match &self.ring {
            RingSpec::PowerSet => Ring::power_set(self.universe)?,
            RingSpec::Atoms(atoms) => Ring::from_atoms(self.universe, atoms)?,
            RingSpec::Generators(g) => generate_ring(self.universe, &SetClass::new(self.universe, g.iter().copied())?)?,
        })
    }

    pub fn submeasure(&self) -> CliResult<Submeasure> {
        let ring = self.ring()?;
        let mu = match &self.rule {
            FiniteRule::Additive(w) => Submeasure::additive(ring, w.clone())?,
            FiniteRule::Distorted {
                base,
                distortion,
                direction,
            } => Submeasure::distorted(ring, base.clone(), *distortion, direction.clone())?,
            FiniteRule::Table(entries) => {
                let missing: Vec<String> = ring
                    .iter()
                    .filter(|s| !entries.contains_key(s))
                    .map(ToString::to_string)
                    .collect();
                if !missing.is_empty() {
                    return Err(CliError::Spec(format!("table has no value for ring members {}", missing.join(", "))));
                }
                Submeasure::table(ring, self.dim, entries.clone())?
            }
            FiniteRule::Zero => Submeasure::zero(ring, self.dim)?,
        };
        if mu.dim() != self.dim {
            return Err(CliError::Spec(format!("rule has dimension {}, model says {}", mu.dim(), self.dim)));
        }
        Ok(mu)
    }
}

impl DyadicModel {
    pub fn rule(&self) -> CliResult<IntervalRule> {
        Ok(IntervalRule {
            scale: self.scale,
            ..IntervalRule::new(self.distortions.clone())?
        })
    }
}

fn join<T>(items: &[T], show: impl Fn(&T) -> String) -> String {
    items.iter().map(show).collect::<Vec<_>>().join("; ")
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[model]")?;
        match &self.model {
            Model::Finite(m) => {
                writeln!(f, "kind = finite\nuniverse = {}\ndim = {}\n", m.universe, m.dim)?;
                writeln!(f, "[ring]")?;
                match &m.ring {
                    RingSpec::PowerSet => writeln!(f, "power_set = true")?,
                    RingSpec::Atoms(a) => writeln!(f, "atoms = {}", join(a, ToString::to_string))?,
                    RingSpec::Generators(g) => writeln!(f, "generators = {}", join(g, ToString::to_string))?,
                }
                writeln!(f, "\n[rule]")?;
                match &m.rule {
                    FiniteRule::Additive(w) => writeln!(f, "kind = additive\nweights = {}", join(w, ToString::to_string))?,
                    FiniteRule::Distorted {
                        base,
                        distortion,
                        direction,
                    } => writeln!(
                        f,
                        "kind = distorted\nbase = {}\ndistortion = {distortion}\ndirection = {}",
                        join(base, format_scalar),
                        join(direction, format_scalar)
                    )?,
                    FiniteRule::Table(entries) => {
                        writeln!(f, "kind = table\n\n[table]")?;
                        for (s, v) in entries {
                            writeln!(f, "{s} = {v}")?;
                        }
                    }
                    FiniteRule::Zero => writeln!(f, "kind = zero")?,
                }
            }
            Model::Dyadic(m) => {
                writeln!(f, "kind = dyadic\ndim = {}\n", m.distortions.len())?;
                writeln!(f, "[rule]\ndistortions = {}\nscale = {:?}", join(&m.distortions, ToString::to_string), m.scale)?;
                if !m.targets.is_empty() {
                    writeln!(f, "\n[targets]")?;
                    for t in &m.targets {
                        writeln!(f, "target = {t}")?;
                    }
                }
            }
        }
        if let Some(d) = &self.density {
            writeln!(f, "\n[density]\nf = {}", join(d.values(), format_scalar))?;
        }
        let o = &self.options;
        if *o != Options::default() {
            writeln!(f, "\n[options]")?;
            if !o.eps_grid.is_empty() {
                writeln!(f, "eps_grid = {}", join(&o.eps_grid, format_scalar))?;
            }
            if let Some(x) = o.tol {
                writeln!(f, "tol = {x:?}")?;
            }
            if let Some(x) = o.max_depth {
                writeln!(f, "max_depth = {x}")?;
            }
            if let Some(x) = o.seed {
                writeln!(f, "seed = {x}")?;
            }
            if let Some(x) = o.max_cover {
                writeln!(f, "max_cover = {x}")?;
            }
            if let Some(x) = o.samples {
                writeln!(f, "samples = {x}")?;
            }
        }
        Ok(())
    }
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

struct Section {
    line: usize,
    entries: Vec<Entry>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("model", &["kind", "universe", "dim"]),
    ("ring", &["power_set", "atoms", "generators"]),
    ("rule", &["kind", "weights", "base", "distortion", "direction", "distortions", "scale"]),
    ("table", &[]),
    ("density", &["f"]),
    ("targets", &["target"]),
    ("options", &["eps_grid", "tol", "max_depth", "seed", "max_cover", "samples"]),
];

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn split_sections(text: &str) -> CliResult<BTreeMap<String, Section>> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(err(line, format!("unknown section [{name}]")));
            }
            if sections.contains_key(name) {
                return Err(err(line, format!("section [{name}] appears twice")));
            }
            sections.insert(name.to_string(), Section { line, entries: Vec::new() });
            current = Some(name.to_string());
            continue;
        }
        let Some(name) = &current else {
            return Err(err(line, "key outside any section"));
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, found {content:?}")))?;
        let key = key.trim().to_string();
        let allowed = SECTIONS.iter().find(|(s, _)| s == name).map(|(_, k)| *k).unwrap_or(&[]);
        let section = sections.get_mut(name).expect("current section exists");
        if name != "table" {
            if !allowed.contains(&key.as_str()) {
                return Err(err(line, format!("unknown key `{key}` in [{name}]")));
            }
            if key != "target" && section.entries.iter().any(|e| e.key == key) {
                return Err(err(line, format!("duplicate key `{key}` in [{name}]")));
            }
        }
        section.entries.push(Entry {
            line,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(sections)
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn require(&self, name: &str, key: &str) -> CliResult<&Entry> {
        self.get(key)
            .ok_or_else(|| err(self.line, format!("[{name}] is missing `{key}`")))
    }

    /// Rejects keys that belong to another variant of the section.
    fn only(&self, name: &str, keys: &[&str]) -> CliResult<()> {
        match self.entries.iter().find(|e| !keys.contains(&e.key.as_str())) {
            Some(e) => Err(err(e.line, format!("key `{}` does not apply here in [{name}]", e.key))),
            None => Ok(()),
        }
    }
}

impl Entry {
    fn parse<T>(&self, f: impl Fn(&str) -> dsub_core::Result<T>) -> CliResult<T> {
        f(&self.value).map_err(|e| err(self.line, e.to_string()))
    }

    fn number<T: FromStr>(&self) -> CliResult<T> {
        self.value
            .parse()
            .map_err(|_| err(self.line, format!("`{}` is not a valid number: {:?}", self.key, self.value)))
    }

    fn list<T>(&self, f: impl Fn(&str) -> dsub_core::Result<T>) -> CliResult<Vec<T>> {
        self.value
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| f(s).map_err(|e| err(self.line, e.to_string())))
            .collect()
    }
}

impl FromStr for InstanceSpec {
    type Err = CliError;

    fn from_str(text: &str) -> CliResult<Self> {
        let sections = split_sections(text)?;
        let section = |name: &str| -> CliResult<&Section> {
            sections
                .get(name)
                .ok_or_else(|| err(0, format!("missing section [{name}]")))
        };
        let model = section("model")?;
        let kind = model.require("model", "kind")?;
        let model = match kind.value.as_str() {
            "finite" => Model::Finite(parse_finite(&sections, model)?),
            "dyadic" => Model::Dyadic(parse_dyadic(&sections, model)?),
            other => return Err(err(kind.line, format!("unknown model kind {other:?}"))),
        };
        let density = match sections.get("density") {
            None => None,
            Some(s) => {
                let e = s.require("density", "f")?;
                let d = Density::new(e.list(parse_scalar)?).map_err(|x| err(e.line, x.to_string()))?;
                Some(d)
            }
        };
        if let (Some(d), Model::Finite(m)) = (&density, &model) {
            if d.values().len() != m.universe {
                return Err(err(
                    sections["density"].line,
                    format!("density has {} values for a universe of size {}", d.values().len(), m.universe),
                ));
            }
        }
        let options = match sections.get("options") {
            None => Options::default(),
            Some(s) => Options {
                eps_grid: s.get("eps_grid").map(|e| e.list(parse_scalar)).transpose()?.unwrap_or_default(),
                tol: s.get("tol").map(Entry::number).transpose()?,
                max_depth: s.get("max_depth").map(Entry::number).transpose()?,
                seed: s.get("seed").map(Entry::number).transpose()?,
                max_cover: s.get("max_cover").map(Entry::number).transpose()?,
                samples: s.get("samples").map(Entry::number).transpose()?,
            },
        };
        Ok(InstanceSpec {
            model,
            density,
            options,
        })
    }
}

fn parse_finite(sections: &BTreeMap<String, Section>, model: &Section) -> CliResult<FiniteModel> {
    model.only("model", &["kind", "universe", "dim"])?;
    let universe: usize = model.require("model", "universe")?.number()?;
    let dim: usize = model.require("model", "dim")?.number()?;
    for name in ["targets"] {
        if let Some(s) = sections.get(name) {
            return Err(err(s.line, format!("[{name}] applies to dyadic models only")));
        }
    }
    let set = |s: &str| parse_set(universe, s);
    let ring = match sections.get("ring") {
        None => RingSpec::PowerSet,
        Some(s) => {
            let e = s
                .entries
                .first()
                .ok_or_else(|| err(s.line, "[ring] needs one of power_set, atoms, generators"))?;
            if let Some(extra) = s.entries.get(1) {
                return Err(err(extra.line, "[ring] takes a single key"));
            }
            match e.key.as_str() {
                "power_set" if e.value == "true" => RingSpec::PowerSet,
                "power_set" => return Err(err(e.line, "power_set must be `true`")),
                "atoms" => RingSpec::Atoms(e.list(set)?),
                _ => RingSpec::Generators(e.list(set)?),
            }
        }
    };
    let rule = sections
        .get("rule")
        .ok_or_else(|| err(model.line, "missing section [rule]"))?;
    let kind = rule.require("rule", "kind")?;
    let table_section = sections.get("table");
    if kind.value != "table" {
        if let Some(t) = table_section {
            return Err(err(t.line, "[table] requires rule kind = table"));
        }
    }
    let rule = match kind.value.as_str() {
        "additive" => {
            rule.only("rule", &["kind", "weights"])?;
            FiniteRule::Additive(rule.require("rule", "weights")?.list(parse_value)?)
        }
        "distorted" => {
            rule.only("rule", &["kind", "base", "distortion", "direction"])?;
            FiniteRule::Distorted {
                base: rule.require("rule", "base")?.list(parse_scalar)?,
                distortion: rule.require("rule", "distortion")?.parse(DistortionId::from_str)?,
                direction: rule.require("rule", "direction")?.list(parse_scalar)?,
            }
        }
        "table" => {
            rule.only("rule", &["kind"])?;
            let t = table_section.ok_or_else(|| err(kind.line, "rule kind = table needs a [table] section"))?;
            let mut entries = BTreeMap::new();
            for e in &t.entries {
                let s = parse_set(universe, &e.key).map_err(|x| err(e.line, x.to_string()))?;
                if entries.insert(s, e.parse(parse_value)?).is_some() {
                    return Err(err(e.line, format!("duplicate table entry for {s}")));
                }
            }
            FiniteRule::Table(entries)
        }
        "zero" => {
            rule.only("rule", &["kind"])?;
            FiniteRule::Zero
        }
        other => return Err(err(kind.line, format!("unknown finite rule kind {other:?}"))),
    };
    Ok(FiniteModel {
        universe,
        dim,
        ring,
        rule,
    })
}

fn parse_dyadic(sections: &BTreeMap<String, Section>, model: &Section) -> CliResult<DyadicModel> {
    model.only("model", &["kind", "dim"])?;
    for name in ["ring", "table", "density"] {
        if let Some(s) = sections.get(name) {
            return Err(err(s.line, format!("[{name}] applies to finite models only")));
        }
    }
    let rule = sections
        .get("rule")
        .ok_or_else(|| err(model.line, "missing section [rule]"))?;
    rule.only("rule", &["distortions", "scale"])?;
    let distortions = rule.require("rule", "distortions")?.list(DistortionId::from_str)?;
    if let Some(d) = model.get("dim") {
        let dim: usize = d.number()?;
        if dim != distortions.len() {
            return Err(err(d.line, format!("dim = {dim} but {} distortions given", distortions.len())));
        }
    }
    let scale = match rule.get("scale") {
        Some(e) => {
            let s: f64 = e.number()?;
            if !(s.is_finite() && s >= 0.0) {
                return Err(err(e.line, "scale must be a finite nonnegative number"));
            }
            s
        }
        None => 1.0,
    };
    let targets = match sections.get("targets") {
        None => Vec::new(),
        Some(s) => s
            .entries
            .iter()
            .map(|e| e.parse(TargetSet::from_str))
            .collect::<CliResult<_>>()?,
    };
    Ok(DyadicModel {
        distortions,
        scale,
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "\
[model]
kind = finite
universe = 3
dim = 1

[ring]
atoms = {0}; {1,2}

[rule]
kind = additive
weights = (1); (0); (0)
";

    #[test]
    fn parses_the_worked_example() {
        let spec: InstanceSpec = WORKED.parse().unwrap();
        let m = spec.finite().unwrap();
        assert_eq!(m.universe, 3);
        assert_eq!(m.ring().unwrap().len(), 4);
        assert_eq!(m.submeasure().unwrap().dim(), 1);
    }

    #[test]
    fn round_trips() {
        let texts = [
            WORKED.to_string(),
            "[model]\nkind = finite\nuniverse = 2\ndim = 2\n[rule]\nkind = distorted\nbase = 1; 1/2\ndistortion = power(1/3)\ndirection = 1; 2\n[density]\nf = 2; 0\n[options]\neps_grid = 1/2; 1/8\nseed = 3\n".into(),
            "[model]\nkind = finite\nuniverse = 2\ndim = 1\n[ring]\ngenerators = {0}\n[rule]\nkind = table\n[table]\n{} = (0)\n{0} = top\n".into(),
            "[model]\nkind = dyadic\n[rule]\ndistortions = sqrt; identity\nscale = 0.5\n[targets]\ntarget = interval 0 1/3\ntarget = cantor 2\n[options]\ntol = 1e-6\nmax_depth = 25\n".into(),
        ];
        for t in texts {
            let spec: InstanceSpec = t.parse().unwrap();
            let again: InstanceSpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, again, "{}", spec);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = WORKED.replace("weights", "wieghts");
        match bad.parse::<InstanceSpec>() {
            Err(CliError::Parse { line, message }) => {
                assert_eq!(line, 11);
                assert!(message.contains("wieghts"));
            }
            other => panic!("{other:?}"),
        }
        let bad = WORKED.replace("{1,2}", "{1,7}");
        assert!(matches!(bad.parse::<InstanceSpec>(), Err(CliError::Parse { line: 7, .. })));
        let bad = WORKED.replace("[ring]", "[rings]");
        assert!(matches!(bad.parse::<InstanceSpec>(), Err(CliError::Parse { line: 6, .. })));
        let bad = format!("{WORKED}[targets]\ntarget = cantor 1\n");
        assert!(bad.parse::<InstanceSpec>().is_err());
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let text = "[model]\nkind = finite\nuniverse = 1\ndim = 1\n[rule]\nkind = table\n[table]\n{} = (0)\n";
        let spec: InstanceSpec = text.parse().unwrap();
        assert!(spec.finite().unwrap().submeasure().is_err());
    }
}
