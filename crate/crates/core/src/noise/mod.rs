// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Stochastic channels injected into simulations.

mod amplitude;
mod config;
mod dephasing;
mod idle;
mod motional;
mod quantizer;
pub mod rng;

pub use amplitude::{sample_shot_amplitude, AmplitudeNoiseModel};
pub use config::NoiseConfig;
pub use dephasing::{dephasing_trajectory, tone_grid, FrequencyTrajectory, TONES_PER_DECADE};
pub use idle::{
    apply_idle_channel, readout_error_probability, IdleOutcome, IdleRates, ShelveSet,
    SHORT_DELAY_SCALE,
};
pub use motional::{motional_modulation, MotionalModel};
pub use quantizer::{quantize_amplitude, QuantizerConfig};
pub use rng::StreamKey;
