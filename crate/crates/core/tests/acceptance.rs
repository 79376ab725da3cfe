//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use coprime_lab::harness::{run_suite, Fault, InstanceReport, Status, SuiteOptions};
use coprime_lab::instances::{load_instance, nilpotent_zoo, export_instance, Instance};
use coprime_lab::lie::{check_class_transfer, lie_ring_of};
use serde_json::Value;

use common::{all_preset_instances, compare_with_oracle, ORACLE_ORDER_LIMIT};

type Outcome = Result<String, String>;

fn criterion_1(fault: Option<Fault>) -> Outcome {
    let zoo = nilpotent_zoo().map_err(|e| e.to_string())?;
    if zoo.len() < 20 {
        return Err(format!("only {} groups", zoo.len()));
    }
    for (name, g) in &zoo {
        if !(27..=2187).contains(&g.order()) {
            return Err(format!("{name} has order {}", g.order()));
        }
        let mut l = lie_ring_of(g).map_err(|e| format!("{name}: {e}"))?;
        if fault == Some(Fault::CorruptStructureConstant) {
            l.corrupt_structure_constant();
        }
        let axioms = l.check_axioms(0);
        if !axioms.bilinearity_exhaustive {
            return Err(format!("{name}: bilinearity was sampled, not exhaustive"));
        }
        if let Some(why) = failure(&axioms.overall()) {
            return Err(format!("{name}: {why}"));
        }
        if let Some(why) = failure(&check_class_transfer(&l, g)) {
            return Err(format!("{name}: class transfer: {why}"));
        }
    }
    Ok(format!("{} nilpotent groups, orders 27..=2187, exhaustive", zoo.len()))
}

fn failure(v: &coprime_lab::verdict::Verdict) -> Option<String> {
    (!v.holds()).then(|| format!("{v:?}"))
}

fn lemma<'a>(r: &'a InstanceReport, name: &str) -> Option<&'a coprime_lab::harness::CheckEntry> {
    r.lemmas.iter().find(|c| c.name == name)
}

fn require_pass(reports: &[InstanceReport], names: &[&str]) -> Result<(), String> {
    for r in reports {
        for name in names {
            match lemma(r, name) {
                Some(c) if c.status == Status::Pass => {}
                Some(c) => return Err(format!("{}: {name} is {} ({:?})", r.instance, c.status.as_str(), c.detail)),
                None => return Err(format!("{}: {name} missing", r.instance)),
            }
        }
    }
    Ok(())
}

fn criterion_2(reports: &[InstanceReport]) -> Outcome {
    if reports.len() < 30 {
        return Err(format!("only {} instances", reports.len()));
    }
    for (p, k) in [(2, 3), (2, 4), (3, 3)] {
        if !reports.iter().any(|r| r.parameters.as_ref().is_some_and(|x| x.p == p && x.k == k)) {
            return Err(format!("no instance with p = {p}, k = {k}"));
        }
    }
    require_pass(
        reports,
        &["valid-setup", "fg1-quotient-centralizers", "fg2-generation", "invariant-sylow", "centralizer-transfer"],
    )?;
    Ok(format!("{} instances, zero failures", reports.len()))
}

fn criterion_3(reports: &[InstanceReport]) -> Outcome {
    let mut checks = 0;
    for r in reports {
        for t in &r.theorems {
            let mut names = vec!["containment", "generation", "degree-bound"];
            if t.mode == "derived" {
                names.push("sylow-generation");
            }
            for name in names {
                let c = t
                    .checks
                    .iter()
                    .find(|c| c.name == name)
                    .ok_or_else(|| format!("{} {}: {name} missing", r.instance, t.mode))?;
                if c.status != Status::Pass {
                    return Err(format!(
                        "{} {}: {name} is {} ({:?})",
                        r.instance,
                        t.mode,
                        c.status.as_str(),
                        c.detail
                    ));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} family checks pass"))
}

fn criterion_4(reports: &[InstanceReport]) -> Outcome {
    let mut met = 0;
    for r in reports {
        let k = r.parameters.as_ref().map_or(0, |x| x.k);
        let expected_d = if k >= 4 { 1 } else { 0 };
        let derived = r.theorem("derived").ok_or_else(|| format!("{}: no derived report", r.instance))?;
        if derived.d != Some(expected_d) {
            return Err(format!("{}: derived theorem ran with d = {:?}", r.instance, derived.d));
        }
        let gamma = r.theorem("gamma").ok_or_else(|| format!("{}: no gamma report", r.instance))?;
        for t in [derived, gamma] {
            match t.status {
                Status::HypothesisNotMet => continue,
                Status::Pass => {}
                other => return Err(format!("{} {}: {} ({:?})", r.instance, t.mode, other.as_str(), t.detail)),
            }
            if t.conclusion_class.is_none() {
                return Err(format!("{} {}: no conclusion class", r.instance, t.mode));
            }
            for name in ["conclusion-nilpotent", "key-commutator-relation", "sanity-ceiling"] {
                if !t.checks.iter().any(|c| c.name == name && c.status == Status::Pass) {
                    return Err(format!("{} {}: {name} did not pass", r.instance, t.mode));
                }
            }
            met += 1;
        }
    }
    if met == 0 {
        return Err("no instance satisfies a hypothesis".into());
    }
    Ok(format!("{met} theorem runs within hypotheses, all conclusions hold"))
}

fn criterion_5(instances: &[Instance]) -> Outcome {
    let mut n = 0;
    let mut objects = 0;
    for inst in instances {
        if inst.setup.group().order() > ORACLE_ORDER_LIMIT {
            continue;
        }
        objects += compare_with_oracle(&inst.setup).map_err(|e| format!("{}: {e}", inst.name))?;
        n += 1;
    }
    Ok(format!("{n} instances, {objects} subgroups and series compared"))
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_coprime-lab"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "coprime-lab {}: exit {:?}\n{}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(())
}

/// Directory contents with timing fields removed, keyed by file name.
fn normalized_outputs(dir: &Path) -> Result<Vec<(String, String)>, String> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|f| {
            let name = f.file_name().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&f).map_err(|e| e.to_string())?;
            let body = if name.ends_with(".json") {
                let mut v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
                strip_timing(&mut v);
                serde_json::to_string_pretty(&v).unwrap()
            } else {
                // drop the trailing wall_ms column
                text.lines()
                    .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok((name, body))
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for run in ["a", "b"] {
        let inst = tmp.path().join(run).join("instances");
        let rep = tmp.path().join(run).join("reports");
        let (inst_s, rep_s) = (inst.to_str().unwrap(), rep.to_str().unwrap());
        run_cli(&["gen", "--seed", "11", "--out", inst_s])?;
        run_cli(&["check", "--instances", inst_s, "--seed", "11", "--out", rep_s, "--jobs", "2"])?;
        runs.push((normalized_outputs(&inst)?, normalized_outputs(&rep)?));
    }
    if runs[0].0 != runs[1].0 {
        return Err("instance files differ between runs".into());
    }
    if runs[0].1 != runs[1].1 {
        let diff = runs[0].1.iter().zip(&runs[1].1).find(|(a, b)| a != b).map(|(a, _)| a.0.clone());
        return Err(format!("reports differ between runs (first: {diff:?})"));
    }
    let inst_dir = tmp.path().join("a").join("instances");
    let mut round_trips = 0;
    for (name, text) in &runs[0].0 {
        let loaded = load_instance(&inst_dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        let again = export_instance(Some(&loaded.name), &loaded.setup).map_err(|e| e.to_string())?;
        let original: Value = serde_json::from_str(text).unwrap();
        let reexported: Value = serde_json::from_str(&again).unwrap();
        if original != reexported {
            return Err(format!("{name} does not round-trip"));
        }
        round_trips += 1;
    }
    Ok(format!(
        "{} reports identical across runs, {round_trips} files round-trip",
        runs[0].1.len()
    ))
}

fn criterion_7(instances: &[Instance]) -> Outcome {
    let opts = SuiteOptions {
        fault: Some(Fault::CorruptStructureConstant),
        ..Default::default()
    };
    let result = run_suite(instances, &opts).map_err(|e| e.to_string())?;
    let mut tripped = Vec::new();
    if criterion_1(opts.fault).is_err() {
        tripped.push(1);
    }
    if criterion_2(&result.reports).is_err() {
        tripped.push(2);
    }
    if criterion_3(&result.reports).is_err() {
        tripped.push(3);
    }
    if criterion_4(&result.reports).is_err() {
        tripped.push(4);
    }
    let lie_failures = result
        .reports
        .iter()
        .filter(|r| r.lemmas.iter().any(|c| c.name.starts_with("lie-") && c.status == Status::Fail))
        .count();
    if tripped.is_empty() {
        return Err("the corrupted structure constant went unnoticed".into());
    }
    if result.exit_code() == 0 {
        return Err("suite exit code is 0 despite the fault".into());
    }
    Ok(format!(
        "criteria {tripped:?} fail under the fault; {lie_failures} instance reports flag the Lie ring"
    ))
}

fn main() {
    let start = Instant::now();
    let instances = all_preset_instances();
    let suite = run_suite(&instances, &SuiteOptions::default()).expect("suite runs");
    let reports = &suite.reports;

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Lie ring axiom suite", criterion_1(None)),
        (2, "coprime lemma suite", criterion_2(reports)),
        (3, "special-subgroup suite", criterion_3(reports)),
        (4, "theorem conclusion suite", criterion_4(reports)),
        (5, "oracle equivalence", criterion_5(&instances)),
        (6, "determinism and round-trip", criterion_6()),
        (7, "bug-detection sensitivity", criterion_7(&instances)),
    ];
    let mut failed = 0;
    for (n, title, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n} ({title}): PASS: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({title}): FAIL: {why}");
            }
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
