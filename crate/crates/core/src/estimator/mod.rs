// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Fitting of benchmarking decays.

mod bootstrap;
mod curve;
mod mle;
mod model;

pub use bootstrap::{
    bootstrap_ci, bootstrap_pooled, fit_with_bootstrap, BootstrapSummary, DEFAULT_RESAMPLES,
};
pub use curve::fit_survival_curve;
pub use mle::{log_likelihood, mle_fit, mle_fit_pooled, DecayFit, FitFlags, A_MAX, EPS_MAX};
pub use model::{decay, survival_model};
