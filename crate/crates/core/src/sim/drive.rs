// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pulse::PulseSpec;

/// Envelope used for the amplitude ramps at both ends of a pulse.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampShape {
    Linear,
    #[default]
    SinSquared,
}

impl RampShape {
    /// Envelope at fractional ramp position `u ∈ [0, 1]`.
    pub fn envelope(self, u: f64) -> f64 {
        match self {
            RampShape::Linear => u,
            RampShape::SinSquared => (FRAC_PI_2 * u).sin().powi(2),
        }
    }
}

/// Power-dependent shift of the qubit frequency caused by the drive itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeemanModel {
    /// Shift in rad/s when the drive runs at the nominal Rabi frequency.
    pub shift_at_full_amp: f64,
}

impl ZeemanModel {
    /// Shift at relative amplitude `r = Ω(t)/Ω_q`, quadratic in `r`.
    pub fn shift(&self, relative_amplitude: f64) -> f64 {
        self.shift_at_full_amp * relative_amplitude * relative_amplitude
    }
}

/// Drive settings shared by every pulse in a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveParams {
    /// Nominal flat-top Rabi frequency Ω_q in rad/s.
    pub omega_q: f64,
    /// Static drive-minus-qubit detuning Δ in rad/s.
    #[serde(default)]
    pub detuning: f64,
    /// Common phase offset added to every pulse.
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub ramp_shape: RampShape,
    #[serde(default)]
    pub zeeman: ZeemanModel,
    /// Number of constant sub-steps per ramp.
    #[serde(default = "default_ramp_steps")]
    pub ramp_steps: usize,
}

fn default_ramp_steps() -> usize {
    64
}

impl DriveParams {
    /// Drive whose nominal flat-top Rabi frequency turns `pulse` into an exact π/2.
    ///
    /// Both ramp shapes average to one half over the discretised ramp, so the
    /// pulse area is `Ω_q (t_half_pi − ramp_time)`.
    pub fn for_pulse(pulse: &PulseSpec) -> Self {
        Self {
            omega_q: nominal_rabi(pulse.t_half_pi, pulse.ramp_time),
            detuning: 0.0,
            phase: 0.0,
            ramp_shape: RampShape::SinSquared,
            zeeman: ZeemanModel::default(),
            ramp_steps: default_ramp_steps(),
        }
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    pub fn with_zeeman(mut self, shift_at_full_amp: f64) -> Self {
        self.zeeman = ZeemanModel { shift_at_full_amp };
        self
    }

    pub fn with_ramp_shape(mut self, shape: RampShape) -> Self {
        self.ramp_shape = shape;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_q > 0.0) {
            return Err(invalid("omega_q must be positive"));
        }
        if self.ramp_steps == 0 {
            return Err(invalid("ramp_steps must be at least 1"));
        }
        Ok(())
    }
}

/// Flat-top Rabi frequency giving a π/2 rotation for the given timing.
pub fn nominal_rabi(t_half_pi: f64, ramp_time: f64) -> f64 {
    FRAC_PI_2 / (t_half_pi - ramp_time)
}

/// Sinusoidal component of an amplitude multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub depth: f64,
    pub omega: f64,
    pub phase: f64,
}

/// Time-dependent multiplier on the drive amplitude,
/// `1 + Σ_k c_k t^k + depth·cos(ω t + θ)`, with `t` measured from the start of
/// the shot.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeTrace {
    pub poly: Vec<f64>,
    pub harmonic: Option<Harmonic>,
}

impl AmplitudeTrace {
    pub fn unity() -> Self {
        Self::default()
    }

    /// Constant relative offset.
    pub fn offset(c0: f64) -> Self {
        Self {
            poly: vec![c0],
            harmonic: None,
        }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self {
            poly: coeffs,
            harmonic: None,
        }
    }

    pub fn with_harmonic(mut self, depth: f64, omega: f64, phase: f64) -> Self {
        self.harmonic = Some(Harmonic {
            depth,
            omega,
            phase,
        });
        self
    }

    pub fn value(&self, t: f64) -> f64 {
        let poly = self.poly.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let harm = self
            .harmonic
            .map_or(0.0, |h| h.depth * (h.omega * t + h.phase).cos());
        1.0 + poly + harm
    }

    /// Exact mean of the multiplier over `[a, b]`.
    pub fn mean(&self, a: f64, b: f64) -> f64 {
        let dt = b - a;
        if dt <= 0.0 {
            return self.value(a);
        }
        let integral_poly: f64 = self
            .poly
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let p = (k + 1) as i32;
                c * (b.powi(p) - a.powi(p)) / p as f64
            })
            .sum();
        let integral_harm = self.harmonic.map_or(0.0, |h| {
            if h.omega == 0.0 {
                h.depth * h.phase.cos() * dt
            } else {
                h.depth * ((h.omega * b + h.phase).sin() - (h.omega * a + h.phase).sin()) / h.omega
            }
        });
        1.0 + (integral_poly + integral_harm) / dt
    }

    /// True when the multiplier does not vary in time.
    pub fn is_static(&self) -> bool {
        self.poly.iter().skip(1).all(|&c| c == 0.0) && self.harmonic.is_none_or(|h| h.depth == 0.0)
    }

    /// Sub-steps needed across an interval so that the multiplier varies
    /// slowly within each one.
    pub(crate) fn substeps(&self, duration: f64) -> usize {
        if self.is_static() {
            return 1;
        }
        let mut n = 16usize;
        if let Some(h) = self.harmonic {
            if h.depth != 0.0 {
                let per_cycle = 24.0;
                n = n.max((duration * h.omega.abs() / (2.0 * PI) * per_cycle).ceil() as usize);
            }
        }
        n
    }
}
