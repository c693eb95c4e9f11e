// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form error per Clifford for each mechanism, the idle-rate algebra
//! and the aggregated budget.

mod idle_rates;
mod rows;
mod table;

pub use idle_rates::{
    estimate_idle_rates, synthesize_idle_measurements, Estimate, IdleMeasurement,
    IdleRateEstimate, Scheme,
};
pub use rows::{
    attenuated_flip_rate, err_amp_drift, err_amp_noise, err_awg, err_decoherence, err_harmonic,
    err_zeeman, leakage_rb_error, ZeemanTime, POST_AMPLIFIER_ATTENUATION_DB,
};
pub use table::{
    budget_curve, budget_table, curve_points, gate_time_grid, write_curve_csv, AmpDrift,
    BudgetInput, BudgetRow, CurvePoint, ErrorBudget, InputUncertainty, Mechanism,
    SimulatedBounds, REFERENCE_ZEEMAN_RESIDUAL_HZ,
};
