//! Benchmark fixtures.

use numerov_core::scenarios::{prepare_variant, PreparedVariant};
use numerov_core::{preset, ScenarioConfig};

/// A preset resampled on `n_points`, with its first variant prepared.
pub fn fixture(name: &str, n_points: usize) -> (ScenarioConfig, PreparedVariant) {
    let mut config = preset(name).expect("preset exists");
    config.grid.n_points = n_points;
    let spec = config.effective_variants()[0].clone();
    let prepared = prepare_variant(&config, &spec).expect("preset variant assembles");
    (config, prepared)
}
