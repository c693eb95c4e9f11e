// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic pulse-level evolution.

mod drive;
mod evolve;
mod fidelity;
mod nonrwa;
mod spectator;

pub use drive::{nominal_rabi, AmplitudeTrace, DriveParams, Harmonic, RampShape, ZeemanModel};
pub use evolve::{
    evolve_pulse, evolve_pulses, evolve_sequence, free_evolution, pulse_propagator, pulse_segments,
    segments_propagator, sequence_pulses, Noiseless, PulseHook, PulseNoise, Segment,
};
pub use fidelity::{avg_pulse_error, avg_state_infidelity, Perturbation};
pub use nonrwa::{counter_rotating_error, counter_rotating_extrapolate, CounterRotatingFit};
pub use spectator::{
    embed, simulate_spectator, spectator_sequence_error, SpectatorConfig, SpectatorOutcome, State6,
};
