// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Randomised benchmarking: gate, idle and interleaved memory variants.

mod dataset;
mod plan;
mod run;

pub use dataset::{PooledCounts, RbDataset, RbMetadata, SequenceCounts};
pub use plan::{
    generate_plan, geometric_lengths, PlannedSequence, RbConfig, RbMode, RbPlan, DEFAULT_MAX_LENGTH,
};
pub use run::{
    irmb_error_per_clifford, run_idle_rb, run_idle_rb_with, run_irmb, run_rb, run_rb_with,
    survival_probabilities, t2_from_irmb_slope, RunOptions, SimTier,
};
