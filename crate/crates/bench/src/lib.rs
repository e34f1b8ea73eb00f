//! Inputs shared by the benchmarks.

use std::path::PathBuf;

use mvp_core::{Scenario, WeightedRulebook};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// A fixture scenario with a fixture rulebook.
pub fn load(scenario: &str, rules: &str) -> (Scenario, WeightedRulebook) {
    let s = Scenario::load(fixture(scenario)).expect("fixture scenario loads");
    let r = WeightedRulebook::load(fixture(rules)).expect("fixture rulebook loads");
    (s, r)
}
