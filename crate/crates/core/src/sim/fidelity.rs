// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::Result;
use crate::linalg::{QubitState, UnitaryOp};
use crate::pulse::PulseSpec;

use super::drive::{AmplitudeTrace, DriveParams};
use super::evolve::{pulse_propagator, PulseNoise};

/// Deviation applied to a single pulse when measuring its error.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Perturbation {
    #[default]
    None,
    /// Static detuning in rad/s.
    Detuning(f64),
    /// Relative Rabi-frequency offset.
    AmplitudeOffset(f64),
    /// Arbitrary amplitude multiplier.
    Trace(AmplitudeTrace),
}

/// Infidelity of `actual` against `ideal` averaged over the six cardinal
/// states. The cardinal states form a 2-design, so this equals the uniform
/// Bloch-sphere average.
pub fn avg_state_infidelity(ideal: &UnitaryOp, actual: &UnitaryOp) -> f64 {
    let states = QubitState::cardinal();
    let total: f64 = states
        .iter()
        .map(|psi| 1.0 - ideal.apply(psi).overlap(&actual.apply(psi)).norm_sqr())
        .sum();
    (total / states.len() as f64).max(0.0)
}

/// Average error of one pulse (gap excluded) under `perturbation`.
pub fn avg_pulse_error(
    ideal: &UnitaryOp,
    pulse: &PulseSpec,
    drive: &DriveParams,
    perturbation: &Perturbation,
) -> Result<f64> {
    let spec = PulseSpec {
        gap_time: 0.0,
        ..*pulse
    };
    let noise = match perturbation {
        Perturbation::None => PulseNoise::default(),
        Perturbation::Detuning(d) => PulseNoise {
            detuning: *d,
            ..PulseNoise::default()
        },
        Perturbation::AmplitudeOffset(e) => PulseNoise {
            trace: AmplitudeTrace::offset(*e),
            ..PulseNoise::default()
        },
        Perturbation::Trace(t) => PulseNoise {
            trace: t.clone(),
            ..PulseNoise::default()
        },
    };
    let actual = pulse_propagator(&spec, drive, &noise, 0.0)?;
    Ok(avg_state_infidelity(ideal, &actual))
}
