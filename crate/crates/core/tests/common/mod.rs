#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeSet;

use coprime_lab::action::ActionSetup;
use coprime_lab::group::commutator_subgroup;
use coprime_lab::instances::{preset_instances, Instance, PRESETS};
use coprime_lab::series::{derived_series, lower_central_series, upper_central_series};
use coprime_lab::subspace::normalized_nonzero_vectors;
use coprime_lab::Group;

use oracle::{count, OracleAction, Set};

pub const ORACLE_ORDER_LIMIT: u64 = 5000;

pub fn all_preset_instances() -> Vec<Instance> {
    PRESETS
        .iter()
        .flat_map(|p| preset_instances(p, 0).expect("preset builds"))
        .collect()
}

fn same(what: &str, main: &Set, brute: &Set) -> Result<(), String> {
    if main == brute {
        Ok(())
    } else {
        Err(format!("{what}: main path order {}, oracle order {}", count(main), count(brute)))
    }
}

/// Compares commutator subgroups, fixed-point subgroups and the three
/// series against the brute-force oracle. Returns the number of objects
/// compared.
pub fn compare_with_oracle(setup: &ActionSetup) -> Result<usize, String> {
    let g = setup.group();
    let o = OracleAction::new(setup);
    let cay = &o.cayley;
    let as_set = |h: &Group| cay.mask_of(h);
    let series_sets = |terms: &[Group]| -> Vec<Set> { terms.iter().map(|t| cay.mask_of(t)).collect() };
    let mut compared = 0;

    if g.order() as usize != cay.order() {
        return Err(format!("|G| = {}, oracle enumerates {}", g.order(), cay.order()));
    }
    same("G", &as_set(g), &cay.whole())?;
    compared += 1;

    // fixed points of single elements
    for a in normalized_nonzero_vectors(setup.p(), setup.k()) {
        let main = as_set(&setup.fixed_subgroup_of_element(&a).map_err(|e| e.to_string())?);
        let brute = o.fixed(&BTreeSet::from([a.clone()]));
        same(&format!("C_G({a:?})"), &main, &brute)?;
        compared += 1;
    }

    // hyperplanes: the library's maximal subgroups must be exactly the
    // oracle's hyperplanes
    let maximal = setup.maximal_subgroups();
    let main_planes: BTreeSet<BTreeSet<Vec<u32>>> =
        maximal.iter().map(|m| m.elements().into_iter().collect()).collect();
    let planes = oracle::hyperplanes(o.p, o.k);
    if main_planes != planes.iter().cloned().collect() {
        return Err("maximal subgroups of A differ from the hyperplanes".into());
    }
    let mut centralizers: Vec<(Group, Set)> = Vec::new();
    for m in &maximal {
        let main_group = setup.fixed_subgroup(m).map_err(|e| e.to_string())?;
        let brute = o.fixed(&m.elements().into_iter().collect());
        same(&format!("C_G({m:?})"), &as_set(&main_group), &brute)?;
        centralizers.push((main_group, brute));
        compared += 1;
    }
    let whole: BTreeSet<Vec<u32>> = oracle::all_vectors(o.p, o.k).into_iter().collect();
    let main_fixed_a = setup
        .fixed_subgroup(&coprime_lab::subspace::ASubgroupDescriptor::whole(o.p, o.k))
        .map_err(|e| e.to_string())?;
    same("C_G(A)", &as_set(&main_fixed_a), &o.fixed(&whole))?;
    compared += 1;

    // commutator subgroups
    let gg = commutator_subgroup(g, g, g).map_err(|e| e.to_string())?;
    same("[G, G]", &as_set(&gg), &cay.commutator(&cay.whole(), &cay.whole()))?;
    compared += 1;
    for (i, (ci, ci_set)) in centralizers.iter().enumerate() {
        let main = commutator_subgroup(ci, g, g).map_err(|e| e.to_string())?;
        same(&format!("[C_G(A_{i}), G]"), &as_set(&main), &cay.commutator(ci_set, &cay.whole()))?;
        compared += 1;
        if let Some((cj, cj_set)) = centralizers.get(i + 1) {
            let main = commutator_subgroup(ci, cj, g).map_err(|e| e.to_string())?;
            same(
                &format!("[C_G(A_{i}), C_G(A_{})]", i + 1),
                &as_set(&main),
                &cay.commutator(ci_set, cj_set),
            )?;
            compared += 1;
        }
    }

    // series
    let lower = lower_central_series(g).map_err(|e| e.to_string())?;
    let brute_lower = cay.lower_central();
    if series_sets(&lower.terms) != brute_lower {
        return Err(format!(
            "lower central series: main orders {:?}, oracle orders {:?}",
            lower.terms.iter().map(|t| t.order()).collect::<Vec<_>>(),
            brute_lower.iter().map(count).collect::<Vec<_>>()
        ));
    }
    let derived = derived_series(g).map_err(|e| e.to_string())?;
    let brute_derived = cay.derived();
    if series_sets(&derived.terms) != brute_derived {
        return Err(format!(
            "derived series: main orders {:?}, oracle orders {:?}",
            derived.terms.iter().map(|t| t.order()).collect::<Vec<_>>(),
            brute_derived.iter().map(count).collect::<Vec<_>>()
        ));
    }
    let upper = upper_central_series(g).map_err(|e| e.to_string())?;
    let brute_upper = cay.upper_central();
    if series_sets(&upper.terms) != brute_upper {
        return Err(format!(
            "upper central series: main orders {:?}, oracle orders {:?}",
            upper.terms.iter().map(|t| t.order()).collect::<Vec<_>>(),
            brute_upper.iter().map(count).collect::<Vec<_>>()
        ));
    }
    compared += 3;
    Ok(compared)
}
