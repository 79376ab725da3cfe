//! Verification pipeline: per-instance reports, the suite runner, and the
//! CSV summary.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{check_fg1_quotient, check_fg2_generation, invariant_sylow, validate_setup, ActionSetup};
use crate::error::{Error, Result};
use crate::group::{normal_closure, Group};
use crate::instances::Instance;
use crate::lie::{
    check_centralizer_transfer, check_class_transfer, check_span_lemma, induced_a_action, lie_ring_of,
    maximal_centralizer_subspaces, span_closure_family, SpanMode,
};
use crate::series::{derived_series, fitting_subgroup, lower_central_series, nilpotency_class, prime_factors};
use crate::special::{
    a_special_lattice, check_aspecial_containment, check_aspecial_degree_bound, check_aspecial_generation,
    check_key_commutator_relation, check_sylow_generation, gamma_a_special_lattice, hypothesis_class,
    SpecialFamily, TheoremMode,
};
use crate::subspace::ASubgroupDescriptor;
use crate::verdict::Verdict;

pub const REPORT_SCHEMA: u64 = 1;
const RANDOM_INVARIANT_SUBGROUPS: usize = 5;
const SPAN_FAMILY_CEILING: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSelection {
    Derived,
    Gamma,
    Both,
}

/// Deliberate defects used to show that the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Perturb one structure constant of every Lie ring the suite builds.
    CorruptStructureConstant,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub mode: ModeSelection,
    /// Derived-series depth; by default the largest `d` with `2^d + 2 ≤ k`.
    pub d: Option<usize>,
    /// Highest special-family degree; by default the degrees the checks need.
    pub max_degree: Option<usize>,
    pub jobs: Option<usize>,
    pub fault: Option<Fault>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            mode: ModeSelection::Both,
            d: None,
            max_degree: None,
            jobs: None,
            fault: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    NotApplicable,
    HypothesisNotMet,
    Error,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::NotApplicable => "not-applicable",
            Status::HypothesisNotMet => "hypothesis-not-met",
            Status::Error => "error",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_degree: Option<usize>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub hypothesis_c: Option<usize>,
    pub conclusion_order: Option<u64>,
    pub conclusion_class: Option<usize>,
    pub family_count: Option<usize>,
    pub family_sizes: Vec<usize>,
    pub checks: Vec<CheckEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieSummary {
    pub subgroup_order: u64,
    pub class: usize,
    pub component_orders: Vec<u64>,
    pub bilinearity: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Parameters {
    pub p: u32,
    pub k: usize,
    pub order: u64,
    pub degree: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceReport {
    pub schema: u64,
    pub instance: String,
    /// Absent when the instance could not be loaded.
    pub parameters: Option<Parameters>,
    pub status: Status,
    pub theorems: Vec<TheoremReport>,
    pub lemmas: Vec<CheckEntry>,
    pub lie: Option<LieSummary>,
    pub wall_ms: f64,
}

impl InstanceReport {
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// Every check in the report, theorem sub-checks first.
    pub fn all_checks(&self) -> impl Iterator<Item = &CheckEntry> {
        self.theorems.iter().flat_map(|t| t.checks.iter()).chain(self.lemmas.iter())
    }

    pub fn theorem(&self, mode: &str) -> Option<&TheoremReport> {
        self.theorems.iter().find(|t| t.mode == mode)
    }
}

fn millis(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn entry_from(name: &str, outcome: Result<Verdict>, start: Instant) -> CheckEntry {
    let (status, detail) = match outcome {
        Ok(Verdict::Holds) => (Status::Pass, None),
        Ok(Verdict::Fails(d)) => (Status::Fail, Some(d)),
        Ok(Verdict::NotApplicable(d)) => (Status::NotApplicable, Some(d)),
        Ok(Verdict::HypothesisNotMet(d)) => (Status::HypothesisNotMet, Some(d)),
        Err(e) => (Status::Error, Some(e.to_string())),
    };
    CheckEntry {
        name: name.to_string(),
        status,
        detail,
        wall_ms: millis(start),
    }
}

fn run_check(checks: &mut Vec<CheckEntry>, name: &str, f: impl FnOnce() -> Result<Verdict>) {
    let start = Instant::now();
    let outcome = f();
    checks.push(entry_from(name, outcome, start));
}

/// Worst status, where a failure outranks an error and both outrank the
/// informational statuses.
fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut out = Status::Pass;
    for s in statuses {
        out = match (out, s) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Error, _) | (_, Status::Error) => Status::Error,
            (Status::Pass, other) => other,
            (current, _) => current,
        };
    }
    out
}

/// Largest `d` with `2^d + 2 ≤ k`.
pub fn default_d(k: usize) -> Option<usize> {
    (0..62).take_while(|&d| (1usize << d) + 2 <= k).last()
}

fn derived_family_degree(d: usize, k: usize, max_degree: Option<usize>) -> usize {
    // degrees with 2^i < k carry the co-order bound
    let bound_degrees = default_d(k + 1).unwrap_or(0);
    max_degree.unwrap_or(bound_degrees.max(d + 1)).max(d)
}

fn gamma_family_degree(k: usize, max_degree: Option<usize>) -> usize {
    max_degree.unwrap_or(k.saturating_sub(1)).max(k.saturating_sub(2)).max(1)
}

fn theorem_skeleton(mode: TheoremMode, k: usize) -> TheoremReport {
    let (name, d, gamma_degree) = match mode {
        TheoremMode::Derived { d } => ("derived", Some(d), None),
        TheoremMode::Gamma => ("gamma", None, Some(k.saturating_sub(2))),
    };
    TheoremReport {
        mode: name.into(),
        d,
        gamma_degree,
        status: Status::Pass,
        detail: None,
        hypothesis_c: None,
        conclusion_order: None,
        conclusion_class: None,
        family_count: None,
        family_sizes: Vec::new(),
        checks: Vec::new(),
    }
}

/// `G^(d)` is nilpotent whenever every `C_G(a)^(d)` is, with the corroborating
/// special-family checks. `Err` only for a violated `2^d + 2 ≤ k`.
pub fn verify_derived_theorem(setup: &ActionSetup, d: usize, max_degree: Option<usize>) -> Result<TheoremReport> {
    let mode = TheoremMode::Derived { d };
    mode.check_bounds(setup.k())?;
    let degree = derived_family_degree(d, setup.k(), max_degree);
    Ok(verify_theorem(setup, mode, |s| a_special_lattice(s, degree)))
}

/// `γ_{k−2}(G)` is nilpotent whenever every `γ_{k−2}(C_G(a))` is, with the
/// corroborating γ-family checks. `Err` only for `k < 3`.
pub fn verify_gamma_theorem(setup: &ActionSetup, max_degree: Option<usize>) -> Result<TheoremReport> {
    let mode = TheoremMode::Gamma;
    mode.check_bounds(setup.k())?;
    let degree = gamma_family_degree(setup.k(), max_degree);
    Ok(verify_theorem(setup, mode, |s| gamma_a_special_lattice(s, degree)))
}

fn verify_theorem(
    setup: &ActionSetup,
    mode: TheoremMode,
    lattice: impl FnOnce(&ActionSetup) -> Result<Vec<SpecialFamily>>,
) -> TheoremReport {
    let k = setup.k();
    let mut report = theorem_skeleton(mode, k);
    let mut checks = Vec::new();

    let start = Instant::now();
    let hypothesis = hypothesis_class(setup, mode);
    let c = match &hypothesis {
        Ok(Ok(c)) => {
            report.hypothesis_c = Some(*c);
            Some((*c).max(1))
        }
        _ => None,
    };
    let hyp_verdict = match hypothesis {
        Ok(Ok(_)) => Ok(Verdict::Holds),
        Ok(Err(why)) => Ok(Verdict::HypothesisNotMet(why)),
        Err(e) => Err(e),
    };
    checks.push(entry_from("hypothesis", hyp_verdict, start));

    if c.is_some() {
        let start = Instant::now();
        let term = mode.term(setup.group(), k);
        report.conclusion_order = Some(term.order());
        report.conclusion_class = nilpotency_class(&term);
        let verdict = Verdict::from_bool(report.conclusion_class.is_some(), || {
            format!("the conclusion subgroup of order {} is not nilpotent", term.order())
        });
        checks.push(entry_from("conclusion-nilpotent", Ok(verdict), start));
    }

    let start = Instant::now();
    let families = lattice(setup);
    match families {
        Err(e) => checks.push(entry_from("special-families", Err(e), start)),
        Ok(families) => {
            report.family_sizes = families.iter().map(|f| f.len()).collect();
            let relevant = mode.family_degree(k);
            report.family_count = families.iter().find(|f| f.degree == relevant).map(|f| f.len());
            run_check(&mut checks, "containment", || Ok(check_aspecial_containment(&families)));
            run_check(&mut checks, "generation", || Ok(check_aspecial_generation(setup, &families)));
            run_check(&mut checks, "degree-bound", || check_aspecial_degree_bound(setup, &families));
            if let TheoremMode::Derived { d } = mode {
                run_check(&mut checks, "sylow-generation", || check_sylow_generation(setup, &families, d));
            }
            if let Some(c) = c {
                run_check(&mut checks, "key-commutator-relation", || {
                    check_key_commutator_relation(setup, &families, c, mode)
                });
                let start = Instant::now();
                let verdict = match (report.conclusion_class, report.family_count) {
                    (Some(class), Some(n)) => {
                        let ceiling = 2 * (c + 1) * n.max(1);
                        Verdict::from_bool(class <= ceiling, || {
                            format!("conclusion class {class} exceeds 2(c + 1)·{n} = {ceiling}")
                        })
                    }
                    _ => Verdict::NotApplicable("no conclusion class recorded".into()),
                };
                checks.push(entry_from("sanity-ceiling", Ok(verdict), start));
            }
        }
    }

    report.status = combine(checks.iter().map(|e| e.status));
    report.detail = checks
        .iter()
        .find(|e| e.status == report.status && e.status != Status::Pass)
        .and_then(|e| e.detail.as_ref().map(|d| format!("{}: {d}", e.name)));
    report.checks = checks;
    report
}

/// Normal `A`-invariant subgroups found by search: series terms, the
/// Fitting subgroup, and normal closures of centralizers and of `A`-orbits
/// of the generators.
pub fn invariant_normal_subgroups(setup: &ActionSetup) -> Result<Vec<Group>> {
    let g = setup.group();
    let mut candidates: Vec<Group> = vec![Group::trivial(g.degree()), g.clone()];
    candidates.extend(lower_central_series(g)?.terms);
    candidates.extend(derived_series(g)?.terms);
    candidates.push(fitting_subgroup(g)?);
    for m in setup.maximal_subgroups() {
        let c = setup.fixed_subgroup(&m)?;
        candidates.push(normal_closure(c.generators(), g)?);
    }
    for x in g.generators() {
        let orbit = a_orbit(setup, x)?;
        candidates.push(normal_closure(&orbit, g)?);
    }
    let mut out: Vec<Group> = Vec::new();
    for c in candidates {
        if !out.iter().any(|h| h.same_as(&c)) && setup.is_invariant(&c) && c.is_normal_in(g) {
            out.push(c);
        }
    }
    Ok(out)
}

fn a_orbit(setup: &ActionSetup, x: &crate::perm::Perm) -> Result<Vec<crate::perm::Perm>> {
    crate::subspace::all_vectors(setup.p(), setup.k())
        .iter()
        .map(|u| setup.apply(u, x))
        .collect()
}

/// `⟨x^A⟩` for `count` random elements `x`.
pub fn random_invariant_subgroups(setup: &ActionSetup, count: usize, seed: u64) -> Result<Vec<Group>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = setup.group();
    (0..count)
        .map(|_| {
            let x = g.random_element(&mut rng);
            Group::from_generators(g.degree(), a_orbit(setup, &x)?)
        })
        .collect()
}

fn lemma_checks(setup: &ActionSetup, opts: &SuiteOptions, lemmas: &mut Vec<CheckEntry>) -> Option<LieSummary> {
    let g = setup.group();
    let all_b: Vec<ASubgroupDescriptor> = std::iter::once(ASubgroupDescriptor::whole(setup.p(), setup.k()))
        .chain(setup.maximal_subgroups())
        .collect();

    run_check(lemmas, "fg1-quotient-centralizers", || {
        let normals = invariant_normal_subgroups(setup)?;
        for (i, n) in normals.iter().enumerate() {
            for b in &all_b {
                if !check_fg1_quotient(setup, n, b)? {
                    return Ok(Verdict::Fails(format!(
                        "normal subgroup {i} (order {}), B = {}",
                        n.order(),
                        crate::lie::describe_subgroup(b)
                    )));
                }
            }
        }
        Ok(Verdict::Holds)
    });

    run_check(lemmas, "invariant-sylow", || {
        for r in prime_factors(g.order()) {
            let s = invariant_sylow(setup, g, r)?;
            let expected = crate::series::r_part(g.order(), r);
            if s.order() != expected || !setup.is_invariant(&s) || !s.is_r_group(r) {
                return Ok(Verdict::Fails(format!("no A-invariant Sylow {r}-subgroup of order {expected}")));
            }
        }
        Ok(Verdict::Holds)
    });

    run_check(lemmas, "fg2-generation", || {
        if setup.k() < 2 {
            return Ok(Verdict::NotApplicable("k < 2".into()));
        }
        let mut subgroups = vec![g.clone()];
        subgroups.extend(random_invariant_subgroups(setup, RANDOM_INVARIANT_SUBGROUPS, opts.seed)?);
        for (i, h) in subgroups.iter().enumerate() {
            if !check_fg2_generation(setup, h)? {
                return Ok(Verdict::Fails(format!(
                    "subgroup {i} (order {}) is not generated by its maximal-subgroup centralizers",
                    h.order()
                )));
            }
        }
        Ok(Verdict::Holds)
    });

    // Lie-ring checks run on the Fitting subgroup, which is nilpotent,
    // characteristic, and equal to G when G is nilpotent.
    let start = Instant::now();
    let prepared = (|| -> Result<_> {
        let f = fitting_subgroup(g)?;
        let restricted = setup.restrict(&f)?;
        let mut l = lie_ring_of(&f)?;
        if opts.fault == Some(Fault::CorruptStructureConstant) {
            l.corrupt_structure_constant();
        }
        let action = induced_a_action(&l, &restricted)?;
        Ok((f, restricted, l, action))
    })();
    let (f, restricted, l, action) = match prepared {
        Ok(x) => x,
        Err(e) => {
            lemmas.push(entry_from("lie-ring", Err(e), start));
            return None;
        }
    };

    let axioms = l.check_axioms(opts.seed);
    let bilinearity = if axioms.bilinearity_exhaustive { "exhaustive" } else { "sampled" };
    lemmas.push(entry_from("lie-axioms", Ok(axioms.overall()), start));
    run_check(lemmas, "lie-class-transfer", || Ok(check_class_transfer(&l, &f)));
    run_check(lemmas, "lie-induced-action", || Ok(action.verify(&l)));
    run_check(lemmas, "centralizer-transfer", || {
        let verdicts = all_b
            .iter()
            .map(|b| check_centralizer_transfer(&l, &restricted, &action, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Verdict::all(verdicts))
    });
    for (name, mode) in [("span-lemma", SpanMode::Pairwise), ("gamma-span-lemma", SpanMode::Gamma)] {
        run_check(lemmas, name, || {
            let seeds = maximal_centralizer_subspaces(&l, &restricted, &action);
            match span_closure_family(&l, &restricted, &action, seeds, mode, SPAN_FAMILY_CEILING) {
                Some(family) => check_span_lemma(&l, &restricted, &action, &family, mode),
                None => Ok(Verdict::NotApplicable(format!(
                    "closure family exceeds {SPAN_FAMILY_CEILING} subspaces"
                ))),
            }
        });
    }
    Some(LieSummary {
        subgroup_order: f.order(),
        class: l.class(),
        component_orders: (1..=l.class()).map(|w| l.component(w).order()).collect(),
        bilinearity: bilinearity.into(),
    })
}

/// Full pipeline for one instance. Errors are recorded in the report.
pub fn check_instance(instance: &Instance, opts: &SuiteOptions) -> InstanceReport {
    let start = Instant::now();
    let setup = &instance.setup;
    let g = setup.group();
    let mut theorems = Vec::new();
    let mut lemmas = Vec::new();

    let validation = validate_setup(setup);
    run_check(&mut lemmas, "valid-setup", || {
        Ok(Verdict::from_bool(validation.valid, || validation.violations.join("; ")))
    });

    if matches!(opts.mode, ModeSelection::Derived | ModeSelection::Both) {
        match opts.d.or_else(|| default_d(setup.k())) {
            Some(d) => match verify_derived_theorem(setup, d, opts.max_degree) {
                Ok(t) => theorems.push(t),
                Err(e) => theorems.push(precondition_report(TheoremMode::Derived { d }, setup.k(), e)),
            },
            None => theorems.push(precondition_report(
                TheoremMode::Derived { d: 0 },
                setup.k(),
                Error::Precondition(format!("no d satisfies 2^d + 2 ≤ k = {}", setup.k())),
            )),
        }
    }
    if matches!(opts.mode, ModeSelection::Gamma | ModeSelection::Both) {
        match verify_gamma_theorem(setup, opts.max_degree) {
            Ok(t) => theorems.push(t),
            Err(e) => theorems.push(precondition_report(TheoremMode::Gamma, setup.k(), e)),
        }
    }

    let lie = lemma_checks(setup, opts, &mut lemmas);
    let status = combine(
        theorems
            .iter()
            .map(|t| t.status)
            .chain(lemmas.iter().map(|e| e.status))
            .map(|s| match s {
                Status::HypothesisNotMet | Status::NotApplicable => Status::Pass,
                other => other,
            }),
    );
    InstanceReport {
        schema: REPORT_SCHEMA,
        instance: instance.name.clone(),
        parameters: Some(Parameters {
            p: setup.p(),
            k: setup.k(),
            order: g.order(),
            degree: g.degree(),
        }),
        status,
        theorems,
        lemmas,
        lie,
        wall_ms: millis(start),
    }
}

/// Report for an instance that could not be built or loaded.
pub fn load_error_report(name: &str, error: &Error) -> InstanceReport {
    InstanceReport {
        schema: REPORT_SCHEMA,
        instance: name.to_string(),
        parameters: None,
        status: Status::Error,
        theorems: Vec::new(),
        lemmas: vec![CheckEntry {
            name: "load".into(),
            status: Status::Error,
            detail: Some(error.to_string()),
            wall_ms: 0.0,
        }],
        lie: None,
        wall_ms: 0.0,
    }
}

fn precondition_report(mode: TheoremMode, k: usize, e: Error) -> TheoremReport {
    let mut t = theorem_skeleton(mode, k);
    t.status = Status::NotApplicable;
    t.detail = Some(e.to_string());
    t
}

/// Maximum conclusion class per `(mode, p, k, c)` cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTable {
    pub cells: BTreeMap<String, usize>,
}

impl ClassTable {
    pub fn key(mode: &str, p: u32, k: usize, c: usize) -> String {
        format!("{mode} p={p} k={k} c={c}")
    }

    pub fn record(&mut self, report: &InstanceReport) {
        let Some(params) = &report.parameters else {
            return;
        };
        for t in &report.theorems {
            if let (Some(c), Some(class)) = (t.hypothesis_c, t.conclusion_class) {
                let key = Self::key(&t.mode, params.p, params.k, c);
                let cell = self.cells.entry(key).or_insert(0);
                *cell = (*cell).max(class);
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub schema: u64,
    pub instances: usize,
    pub failed: usize,
    pub errors: usize,
    pub table: ClassTable,
}

pub struct SuiteResult {
    pub reports: Vec<InstanceReport>,
    pub summary: SuiteSummary,
}

impl SuiteResult {
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }
}

/// Checks every instance on a worker pool; reports come back in input
/// order.
pub fn run_suite(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteResult> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let reports: Vec<InstanceReport> = pool.install(|| instances.par_iter().map(|i| check_instance(i, opts)).collect());
    Ok(summarize(reports))
}

pub fn summarize(reports: Vec<InstanceReport>) -> SuiteResult {
    let mut table = ClassTable::default();
    for r in &reports {
        table.record(r);
    }
    let summary = SuiteSummary {
        schema: REPORT_SCHEMA,
        instances: reports.len(),
        failed: reports.iter().filter(|r| r.status == Status::Fail).count(),
        errors: reports.iter().filter(|r| r.status == Status::Error).count(),
        table,
    };
    SuiteResult { reports, summary }
}

pub const CSV_HEADER: [&str; 14] = [
    "instance",
    "p",
    "k",
    "order",
    "status",
    "derived_d",
    "derived_status",
    "derived_c",
    "derived_class",
    "gamma_status",
    "gamma_c",
    "gamma_class",
    "failed_checks",
    "wall_ms",
];

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_row(r: &InstanceReport) -> Vec<String> {
    let derived = r.theorem("derived");
    let gamma = r.theorem("gamma");
    let failed: Vec<&str> = r
        .all_checks()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.name.as_str())
        .collect();
    vec![
        r.instance.clone(),
        opt(r.parameters.as_ref().map(|x| x.p)),
        opt(r.parameters.as_ref().map(|x| x.k)),
        opt(r.parameters.as_ref().map(|x| x.order)),
        r.status.as_str().into(),
        opt(derived.and_then(|t| t.d)),
        derived.map(|t| t.status.as_str().to_string()).unwrap_or_default(),
        opt(derived.and_then(|t| t.hypothesis_c)),
        opt(derived.and_then(|t| t.conclusion_class)),
        gamma.map(|t| t.status.as_str().to_string()).unwrap_or_default(),
        opt(gamma.and_then(|t| t.hypothesis_c)),
        opt(gamma.and_then(|t| t.conclusion_class)),
        failed.join(";"),
        format!("{:.3}", r.wall_ms),
    ]
}

pub fn write_csv<W: Write>(out: W, reports: &[InstanceReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in reports {
        w.write_record(csv_row(r)).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Internal(format!("csv: {e}"))
}

/// Concatenates summary CSVs with matching headers, keeping one header.
pub fn merge_csv(inputs: &[&Path], out: impl Write) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    let mut rows = 0;
    for path in inputs {
        let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
        let header = r.headers().map_err(csv_error)?.clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::Schema {
                location: path.display().to_string(),
                message: "CSV header does not match the summary format".into(),
            });
        }
        for rec in r.records() {
            w.write_record(&rec.map_err(csv_error)?).map_err(csv_error)?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_extraspecial, gen_gl_module, NamedBlock};

    fn inst(name: &str, setup: ActionSetup) -> Instance {
        Instance {
            name: name.into(),
            setup,
        }
    }

    #[test]
    fn default_depths() {
        assert_eq!(default_d(2), None);
        assert_eq!(default_d(3), Some(0));
        assert_eq!(default_d(4), Some(1));
        assert_eq!(default_d(5), Some(1));
        assert_eq!(default_d(6), Some(2));
    }

    #[test]
    fn abelian_instance_passes_with_class_one() {
        let s = gen_gl_module(7, 3, 2, 3, 5).unwrap();
        let r = check_instance(&inst("gl", s), &SuiteOptions::default());
        assert_eq!(r.status, Status::Pass, "{:#?}", r);
        let t = r.theorem("derived").unwrap();
        assert_eq!(t.hypothesis_c, Some(1));
        assert_eq!(t.conclusion_class, Some(1));
    }

    #[test]
    fn trivial_action_conclusion_equals_hypothesis() {
        let block = NamedBlock::Heisenberg27.block().unwrap();
        let s = ActionSetup::trivial(block.group, 2, 3).unwrap();
        let r = check_instance(&inst("triv", s), &SuiteOptions::default());
        assert_eq!(r.status, Status::Pass, "{:#?}", r);
        for mode in ["derived", "gamma"] {
            let t = r.theorem(mode).unwrap();
            assert_eq!(t.hypothesis_c, Some(2));
            assert_eq!(t.conclusion_class, Some(2));
        }
    }

    #[test]
    fn rank_two_is_outside_both_theorems() {
        let s = gen_extraspecial(3, 1, 2, 2).unwrap();
        let r = check_instance(&inst("heis", s), &SuiteOptions::default());
        assert!(r.theorems.iter().all(|t| t.status == Status::NotApplicable));
        assert_eq!(r.status, Status::Pass, "{:#?}", r);
    }

    #[test]
    fn explicit_d_out_of_range_is_not_applicable() {
        let s = gen_gl_module(3, 3, 2, 3, 0).unwrap();
        let opts = SuiteOptions {
            d: Some(1),
            mode: ModeSelection::Derived,
            ..Default::default()
        };
        let r = check_instance(&inst("x", s), &opts);
        assert_eq!(r.theorems.len(), 1);
        assert_eq!(r.theorems[0].status, Status::NotApplicable);
    }

    #[test]
    fn corrupted_ring_fails_the_report() {
        let s = gen_extraspecial(3, 2, 2, 3).unwrap();
        let opts = SuiteOptions {
            fault: Some(Fault::CorruptStructureConstant),
            ..Default::default()
        };
        let result = run_suite(&[inst("heis", s)], &opts).unwrap();
        assert_eq!(result.exit_code(), 1);
        assert!(result.reports[0].failed());
    }

    #[test]
    fn empty_suite_exits_zero() {
        let result = run_suite(&[], &SuiteOptions::default()).unwrap();
        assert_eq!(result.exit_code(), 0);
        assert_eq!(result.summary.instances, 0);
    }

    #[test]
    fn csv_round_trip_merge() {
        let s = gen_gl_module(3, 1, 2, 1, 0).unwrap();
        let result = run_suite(&[inst("c3", s)], &SuiteOptions::default()).unwrap();
        let dir = std::env::temp_dir().join(format!("coprime-lab-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let a = dir.join("a.csv");
        write_csv(std::fs::File::create(&a).unwrap(), &result.reports).unwrap();
        let mut merged = Vec::new();
        assert_eq!(merge_csv(&[&a, &a], &mut merged).unwrap(), 2);
        let text = String::from_utf8(merged).unwrap();
        assert_eq!(text.lines().count(), 3);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn class_table_is_monotone() {
        let mut table = ClassTable::default();
        let block = NamedBlock::Heisenberg27.block().unwrap();
        let heis = ActionSetup::trivial(block.group, 2, 3).unwrap();
        let r = check_instance(&inst("t", heis), &SuiteOptions::default());
        table.record(&r);
        let before = table.clone();
        let ab = gen_gl_module(7, 3, 2, 3, 1).unwrap();
        table.record(&check_instance(&inst("a", ab), &SuiteOptions::default()));
        for (k, v) in &before.cells {
            assert!(table.cells[k] >= *v);
        }
    }
}
