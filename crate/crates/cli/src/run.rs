//! The four subcommands. Each returns a [`RunReport`] whose property list is
//! sorted by name, so output is deterministic for a fixed instance.

use rayon::prelude::*;
use serde::Serialize;

use dsub_core::choquet::{check_pgp_preservation, choquet_integral, derived_submeasure};
use dsub_core::dyadic::{
    check_continuity_sequence, check_exhaustive_sequence, check_increasing_limit, check_inner_convergence,
    check_mu_cauchy, check_sampled_subadditivity, SequenceCheck, SequenceFamily, TracePoint,
};
use dsub_core::extension::{
    extend, inner_extension, verify_closure_ring, verify_inner_extension, verify_norm_uniqueness,
    verify_null_completeness, verify_null_completion, NullWitness,
};
use dsub_core::fntopology::{check_filterbase_axioms, check_rho_triangle};
use dsub_core::lattice::LatticeValue;
use dsub_core::numeric::Scalar;
use dsub_core::report::{PropertyReport, Verdict};
use dsub_core::setring::{parse_set, FiniteSet};
use dsub_core::submeasure::{
    check_ac_condition, check_sc_equivalence, check_sigma_subadditive, check_usc_equivalence, classify,
    sample_chained_union_bound, ClassFlags, Submeasure, SubmeasureClass,
};

use crate::error::{CliError, CliResult};
use crate::spec::{InstanceSpec, Model};

pub const SCHEMA: &str = "report_v1";

const DEFAULT_TOL: f64 = 1e-6;
const DEFAULT_MAX_DEPTH: u32 = 50;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_MAX_COVER: usize = 4;
const DEFAULT_SAMPLES: usize = 1000;
const DELTA_LEVELS: usize = 8;

/// Command-line values that take precedence over the instance's `[options]`.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub eps_grid: Option<Vec<Scalar>>,
    pub tol: Option<f64>,
    pub max_depth: Option<u32>,
    pub seed: Option<u64>,
}

struct Settings {
    eps_grid: Vec<Scalar>,
    tol: f64,
    max_depth: u32,
    seed: u64,
    max_cover: usize,
    samples: usize,
}

fn settings(spec: &InstanceSpec, o: &Overrides) -> Settings {
    let s = &spec.options;
    Settings {
        eps_grid: o.eps_grid.clone().unwrap_or_else(|| s.eps_grid.clone()),
        tol: o.tol.or(s.tol).unwrap_or(DEFAULT_TOL),
        max_depth: o.max_depth.or(s.max_depth).unwrap_or(DEFAULT_MAX_DEPTH),
        seed: o.seed.or(s.seed).unwrap_or(DEFAULT_SEED),
        max_cover: s.max_cover.unwrap_or(DEFAULT_MAX_COVER),
        samples: s.samples.unwrap_or(DEFAULT_SAMPLES),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub class: SubmeasureClass,
    pub flags: ClassFlags,
    /// Reports for the class-level conditions, which decide the class but
    /// are not themselves claims about the instance.
    pub conditions: Vec<PropertyReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub set: FiniteSet,
    pub value: LatticeValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionSummary {
    pub hypotheses: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mu_star: Vec<TableRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub r_zero: Vec<FiniteSet>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<NullWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChoquetSummary {
    pub set: FiniteSet,
    pub value: LatticeValue,
    pub derived: ClassSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct DyadicTrace {
    pub property: String,
    pub subject: String,
    pub first_index: Option<u32>,
    pub trace: Vec<TracePoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassSummary>,
    pub properties: Vec<PropertyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choquet: Option<ChoquetSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dyadic: Vec<DyadicTrace>,
    pub exit_status: i32,
}

impl RunReport {
    fn new(command: &'static str, spec: &InstanceSpec, mut properties: Vec<PropertyReport>) -> Self {
        properties.sort_by(|a, b| a.property.cmp(&b.property));
        let exit_status = i32::from(properties.iter().any(PropertyReport::failed));
        RunReport {
            schema: SCHEMA,
            command,
            instance: spec.to_string(),
            classification: None,
            properties,
            extension: None,
            choquet: None,
            dyadic: Vec::new(),
            exit_status,
        }
    }
}

fn finite_submeasure(spec: &InstanceSpec, command: &'static str) -> CliResult<Submeasure> {
    match &spec.model {
        Model::Finite(m) => m.submeasure(),
        Model::Dyadic(_) => Err(CliError::ModelMismatch {
            command,
            expected: "finite",
        }),
    }
}

/// Splits classify's reports into the D-submeasure axioms, which are checked
/// properties, and the class-level conditions, which only rank the instance.
fn summarize(mu: &Submeasure) -> (ClassSummary, Vec<PropertyReport>) {
    const AXIOMS: [&str; 3] = ["monotone", "continuity", "subadditively_continuous"];
    let c = classify(mu);
    let (axioms, conditions) = c.reports.into_iter().partition(|r| AXIOMS.contains(&r.property.as_str()));
    (
        ClassSummary {
            class: c.class,
            flags: c.flags,
            conditions,
        },
        axioms,
    )
}

fn gated(name: &str, ok: bool, reason: &str, run: impl FnOnce() -> PropertyReport) -> PropertyReport {
    if ok {
        run()
    } else {
        PropertyReport::vacuous(name, reason)
    }
}

pub fn cmd_check(spec: &InstanceSpec, o: &Overrides) -> CliResult<RunReport> {
    let mu = finite_submeasure(spec, "check")?;
    let s = settings(spec, o);
    let (summary, mut properties) = summarize(&mu);
    let class = summary.class;
    let grid = &s.eps_grid;
    let suites: Vec<Box<dyn Fn() -> PropertyReport + Sync>> = vec![
        Box::new(|| check_sc_equivalence(&mu, grid).report),
        Box::new(|| check_usc_equivalence(&mu, grid).report),
        Box::new(|| check_sigma_subadditive(&mu, s.max_cover)),
        Box::new(|| {
            gated("ac_condition", class >= SubmeasureClass::D, "requires a D-submeasure", || {
                check_ac_condition(&mu)
            })
        }),
        Box::new(|| {
            gated("rho_triangle", class >= SubmeasureClass::Ds, "requires a subadditive submeasure", || {
                check_rho_triangle(&mu)
            })
        }),
        Box::new(|| check_filterbase_axioms(&mu, grid)),
        Box::new(|| sample_chained_union_bound(&mu, DELTA_LEVELS, s.samples, s.seed)),
    ];
    properties.extend(suites.par_iter().map(|f| f()).collect::<Vec<_>>());
    let mut report = RunReport::new("check", spec, properties);
    report.classification = Some(summary);
    Ok(report)
}

pub fn cmd_extend(spec: &InstanceSpec) -> CliResult<RunReport> {
    if !spec.is_finite() {
        return Err(CliError::ExtensionNeedsFinite);
    }
    let mu = finite_submeasure(spec, "extend")?;
    let f = mu.as_set_function();
    let (summary, extension, properties) = match extend(f) {
        Ok(ext) => {
            let (summary, _) = summarize(&mu);
            let rows = ext
                .mu_star
                .entries()
                .map(|(a, v)| TableRow { set: *a, value: v.clone() })
                .collect();
            let ext_summary = ExtensionSummary {
                hypotheses: "order bounded, exhaustive, D_u: met".into(),
                mu_star: rows,
                r_zero: ext.r_zero.sets().to_vec(),
                witnesses: ext.witnesses,
            };
            (summary, ext_summary, ext.reports)
        }
        Err(e) => {
            let (summary, _) = summarize(&mu);
            let alt = inner_extension(f).unwrap_or_else(|_| f.clone());
            let reports = vec![
                verify_inner_extension(f),
                verify_closure_ring(f),
                verify_null_completeness(f),
                verify_norm_uniqueness(f, &alt),
                verify_null_completion(f),
            ];
            let ext_summary = ExtensionSummary {
                hypotheses: format!("not met: {e}"),
                mu_star: Vec::new(),
                r_zero: Vec::new(),
                witnesses: Vec::new(),
            };
            (summary, ext_summary, reports)
        }
    };
    let mut report = RunReport::new("extend", spec, properties);
    report.classification = Some(summary);
    report.extension = Some(extension);
    Ok(report)
}

pub fn cmd_choquet(spec: &InstanceSpec, set_expr: &str) -> CliResult<RunReport> {
    let mu = finite_submeasure(spec, "choquet")?;
    let density = spec.density.as_ref().ok_or(CliError::MissingDensity)?;
    let a = parse_set(mu.domain().universe_size(), set_expr)?;
    let value = choquet_integral(mu.as_set_function(), density, &a)?;
    let derived = derived_submeasure(&mu, density)?;
    let (derived_summary, axioms) = summarize(&derived);
    let mut properties: Vec<PropertyReport> = axioms
        .into_iter()
        .map(|mut r| {
            r.property = format!("derived_{}", r.property);
            r
        })
        .collect();
    properties.push(check_pgp_preservation(&mu, density));
    let mut report = RunReport::new("choquet", spec, properties);
    report.choquet = Some(ChoquetSummary {
        set: a,
        value,
        derived: derived_summary,
    });
    Ok(report)
}

pub fn cmd_dyadic(spec: &InstanceSpec, o: &Overrides) -> CliResult<RunReport> {
    let Model::Dyadic(model) = &spec.model else {
        return Err(CliError::ModelMismatch {
            command: "dyadic",
            expected: "dyadic",
        });
    };
    let s = settings(spec, o);
    let rule = model.rule()?;
    let mut checks: Vec<(String, SequenceCheck)> = Vec::new();
    for t in &model.targets {
        let family = SequenceFamily::InnerRefinement(t.clone());
        checks.push((t.to_string(), check_inner_convergence(&rule, t, s.tol, s.max_depth)?));
        checks.push((t.to_string(), check_increasing_limit(&rule, &family, s.max_depth, s.tol)?));
        checks.push((t.to_string(), check_mu_cauchy(&rule, &family, s.max_depth, s.tol)?));
    }
    let prefix = SequenceFamily::ShrinkingPrefix;
    let disjoint = SequenceFamily::DisjointDyadic;
    checks.push((prefix.to_string(), check_continuity_sequence(&rule, &prefix, s.max_depth, s.tol)?));
    checks.push((disjoint.to_string(), check_exhaustive_sequence(&rule, &disjoint, s.max_depth, s.tol)?));

    let mut properties = Vec::new();
    let mut traces = Vec::new();
    for (subject, c) in checks {
        let mut r = c.report;
        if model.targets.len() > 1 && r.property != "continuity_sequence" && r.property != "exhaustive_sequence" {
            r.property = format!("{} [{subject}]", r.property);
        }
        traces.push(DyadicTrace {
            property: r.property.clone(),
            subject,
            first_index: c.first_index,
            trace: c.trace,
        });
        properties.push(r);
    }
    let depth = s.max_depth.min(20);
    properties.push(check_sampled_subadditivity(&rule, s.samples, depth, s.seed, s.tol)?);
    let mut report = RunReport::new("dyadic", spec, properties);
    traces.sort_by(|a, b| a.property.cmp(&b.property));
    report.dyadic = traces;
    Ok(report)
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "FAILS",
        Verdict::Vacuous => "vacuous",
    }
}

fn render_property(out: &mut String, r: &PropertyReport) {
    out.push_str(&format!("  {:<8} {}\n", verdict_word(r.verdict), r.property));
    if let Some(w) = &r.witness {
        let sets: Vec<String> = w.sets.iter().map(ToString::to_string).collect();
        let values: Vec<String> = w.values.iter().map(ToString::to_string).collect();
        out.push_str(&format!("           witness: sets [{}]", sets.join(", ")));
        if !values.is_empty() {
            out.push_str(&format!(" values [{}]", values.join(", ")));
        }
        out.push_str(&format!("; {}\n", w.detail));
    }
    for n in &r.notes {
        out.push_str(&format!("           note: {n}\n"));
    }
    if !r.moduli.is_empty() {
        let rows: Vec<String> = r
            .moduli
            .iter()
            .map(|m| format!("{} -> {}", dsub_core::numeric::format_scalar(&m.epsilon), m.delta))
            .collect();
        out.push_str(&format!("           moduli (epsilon -> delta): {}\n", rows.join(", ")));
    }
}

/// Plain-text rendering.
pub fn render_text(r: &RunReport) -> String {
    let mut out = format!("{} report ({})\n\ninstance:\n", r.command, r.schema);
    for line in r.instance.lines().filter(|l| !l.is_empty()) {
        out.push_str(&format!("  {line}\n"));
    }
    if let Some(c) = &r.classification {
        out.push_str(&format!("\nclassification: {}\n", c.class));
        for cond in &c.conditions {
            render_property(&mut out, cond);
        }
    }
    if let Some(ch) = &r.choquet {
        out.push_str(&format!("\nintegral over {}: {}\n", ch.set, ch.value));
        out.push_str(&format!("derived submeasure class: {}\n", ch.derived.class));
    }
    if let Some(e) = &r.extension {
        out.push_str(&format!("\nextension hypotheses: {}\n", e.hypotheses));
        if !e.mu_star.is_empty() {
            out.push_str("mu_star:\n");
            for row in &e.mu_star {
                out.push_str(&format!("  {} = {}\n", row.set, row.value));
            }
            let r0: Vec<String> = e.r_zero.iter().map(ToString::to_string).collect();
            out.push_str(&format!("R0 ({} sets): {}\n", r0.len(), r0.join(" ")));
            out.push_str("null-completion witnesses (inner <= set <= outer):\n");
            for w in &e.witnesses {
                out.push_str(&format!("  {} <= {} <= {}\n", w.inner, w.set, w.outer));
            }
        }
    }
    for t in &r.dyadic {
        let last = t.trace.last();
        out.push_str(&format!(
            "\n{} on {}: first index {}, last value {}, residual {}\n",
            t.property,
            t.subject,
            t.first_index.map_or("none".into(), |n| n.to_string()),
            last.map_or("-".into(), |p| format!("{:.12}", p.value)),
            last.map_or("-".into(), |p| format!("{:.3e}", p.residual)),
        ));
    }
    out.push_str("\nproperties:\n");
    for p in &r.properties {
        render_property(&mut out, p);
    }
    out.push_str(&format!("\nexit status {}\n", r.exit_status));
    out
}
