// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures for the criterion benchmarks.

use ionbench_core::noise::NoiseConfig;
use ionbench_core::rb::{generate_plan, RbConfig, RbPlan};

/// A small benchmarking plan at the reference gate time.
pub fn small_plan(seed: u64) -> RbPlan {
    let mut config = RbConfig::new(13e-6);
    config.lengths = vec![1, 30, 100, 300];
    config.seqs_per_length = 4;
    config.shots_per_seq = 100;
    config.master_seed = seed;
    generate_plan(&config).expect("valid plan")
}

/// Depolarisation near the measured error per Clifford.
pub fn reference_noise() -> NoiseConfig {
    NoiseConfig::depolarizing(1.5e-7)
}
