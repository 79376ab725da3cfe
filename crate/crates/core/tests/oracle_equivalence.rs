mod common;

use coprime_lab::action::ActionSetup;
use coprime_lab::instances::nilpotent_zoo;
use coprime_lab::series::prime_factors;

use common::{all_preset_instances, compare_with_oracle, ORACLE_ORDER_LIMIT};

#[test]
fn preset_instances_agree_with_brute_force() {
    let mut checked = 0;
    for inst in all_preset_instances() {
        if inst.setup.group().order() > ORACLE_ORDER_LIMIT {
            continue;
        }
        if let Err(e) = compare_with_oracle(&inst.setup) {
            panic!("{}: {e}", inst.name);
        }
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} instances within the oracle limit");
}

#[test]
fn zoo_series_agree_with_brute_force() {
    for (name, g) in nilpotent_zoo().unwrap() {
        if g.order() > 1000 {
            continue;
        }
        let primes = prime_factors(g.order());
        let p = [2u32, 3, 5, 7, 11].into_iter().find(|p| !primes.contains(&(*p as u64))).unwrap();
        let setup = ActionSetup::trivial(g, p, 1).unwrap();
        if let Err(e) = compare_with_oracle(&setup) {
            panic!("{name}: {e}");
        }
    }
}
