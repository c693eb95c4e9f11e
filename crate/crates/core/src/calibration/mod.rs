// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-loop amplitude and frequency calibration and Walsh drift
//! spectroscopy against the pulse simulator.

mod amplitude;
mod drift;
mod frequency;
mod target;
mod trace;
mod walsh;

pub use amplitude::{
    amplitude_cal_loop, amplitude_cal_step, amplitude_train, invert_amplitude, AmplitudeLoopResult,
    AmplitudeStep, CalLoopConfig, LINEAR_LIMIT,
};
pub use drift::{
    amplitude_error_per_pulse, drift_error_from_log, run_amplitude_drift, DriftOutcome,
    DriftScenario,
};
pub use frequency::{
    coherent_error_per_clifford, frequency_cal_loop, frequency_cal_step, invert_frequency,
    pair_train, FrequencyLoopResult, FrequencyStep,
};
pub use target::{CalTarget, Measurement, PulseTrain};
pub use trace::{read_trace, write_trace, CalKind, CalRecord};
pub use walsh::{
    walsh_block_sum, walsh_coefficients, walsh_fit, walsh_function, walsh_m, walsh_survival,
    synthesize_walsh_run, walsh_train, Sigma0Policy, WalshEstimate, WalshFit, WalshRun, WALSH_ORDERS,
};
