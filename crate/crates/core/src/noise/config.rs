// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::amplitude::AmplitudeNoiseModel;
use super::idle::IdleRates;
use super::motional::MotionalModel;

/// Every stochastic channel applied during a benchmarking run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Symmetric readout flip probability applied to every shot.
    #[serde(default)]
    pub spam: f64,
    /// Depolarizing probability per Clifford.
    #[serde(default)]
    pub depolarizing: f64,
    #[serde(default)]
    pub amplitude: AmplitudeNoiseModel,
    #[serde(default)]
    pub motional: Option<MotionalModel>,
    /// Static drive-minus-qubit detuning in Hz.
    #[serde(default)]
    pub detuning_hz: f64,
    /// ac Zeeman shift at full amplitude, in Hz.
    #[serde(default)]
    pub zeeman_hz: f64,
    /// White frequency-noise coherence time; `None` disables dephasing.
    #[serde(default)]
    pub t2: Option<f64>,
    #[serde(default)]
    pub idle: IdleRates,
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn depolarizing(p: f64) -> Self {
        Self {
            depolarizing: p,
            ..Self::default()
        }
    }

    pub fn detuning(&self) -> f64 {
        TAU * self.detuning_hz
    }

    pub fn zeeman(&self) -> f64 {
        TAU * self.zeeman_hz
    }

    /// True when every shot of a sequence sees identical coherent errors.
    pub fn is_shot_independent(&self) -> bool {
        self.amplitude.is_deterministic() && self.motional.is_none() && self.t2.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.5).contains(&self.spam) {
            return Err(invalid("spam must lie in [0, 0.5]"));
        }
        if !(0.0..=0.5).contains(&self.depolarizing) {
            return Err(invalid("depolarizing must lie in [0, 0.5]"));
        }
        if let Some(t2) = self.t2 {
            if !(t2 > 0.0) {
                return Err(invalid("t2 must be positive"));
            }
        }
        if !self.detuning_hz.is_finite() || !self.zeeman_hz.is_finite() {
            return Err(invalid("detuning and Zeeman shift must be finite"));
        }
        self.amplitude.validate()?;
        if let Some(m) = &self.motional {
            m.validate()?;
        }
        self.idle.validate()
    }
}
