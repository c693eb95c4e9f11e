// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::sim::AmplitudeTrace;

/// Rabi-frequency modulation from a heated radial motional mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionalModel {
    /// Effective Lamb-Dicke parameter.
    pub eta: f64,
    /// Mode frequency in rad/s.
    pub omega_m: f64,
    /// Mean occupation at the start of each shot.
    pub n_bar0: f64,
    /// Heating rate in quanta per second.
    pub heating_rate: f64,
}

impl Default for MotionalModel {
    fn default() -> Self {
        Self {
            eta: 9.3e-4,
            omega_m: TAU * 5.6e6,
            n_bar0: 2.6,
            heating_rate: 370.0,
        }
    }
}

impl MotionalModel {
    pub fn validate(&self) -> Result<()> {
        if [self.eta, self.omega_m, self.n_bar0, self.heating_rate]
            .iter()
            .any(|&v| !(v >= 0.0))
        {
            return Err(invalid("motional parameters must be non-negative"));
        }
        Ok(())
    }

    /// Mean occupation after `t` seconds of the shot.
    pub fn n_bar(&self, t: f64) -> f64 {
        self.n_bar0 + self.heating_rate * t
    }

    /// Relative modulation depth `2η√n̄` at time `t`.
    pub fn depth(&self, t: f64) -> f64 {
        2.0 * self.eta * self.n_bar(t).sqrt()
    }

    /// Envelope of the per-pulse error, `(δΩ/ω_m)²` with
    /// `δΩ = (3π/4) η √(n̄ + ½) / t_half_pi`.
    pub fn envelope_error(&self, n_bar: f64, t_half_pi: f64) -> f64 {
        let d_omega = 0.75 * PI * self.eta * (n_bar + 0.5).sqrt() / t_half_pi;
        (d_omega / self.omega_m).powi(2)
    }
}

/// Amplitude multiplier for one pulse starting `t_elapsed` into the shot, with
/// a uniformly random modulation phase.
pub fn motional_modulation<R: Rng + ?Sized>(
    model: &MotionalModel,
    t_elapsed: f64,
    rng: &mut R,
) -> AmplitudeTrace {
    let theta = rng.random_range(0.0..TAU);
    let depth = model.depth(t_elapsed.max(0.0));
    if depth == 0.0 {
        return AmplitudeTrace::unity();
    }
    AmplitudeTrace::unity().with_harmonic(depth, model.omega_m, theta)
}
