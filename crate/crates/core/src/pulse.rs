// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Shaped ±π/2 pulse descriptions.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::UnitaryOp;

/// Default amplitude ramp duration at each end of a pulse.
pub const DEFAULT_RAMP_TIME: f64 = 40e-9;
/// Default dead time between consecutive pulses.
pub const DEFAULT_GAP_TIME: f64 = 40e-9;

/// One of the four native generators, ordered `+X, −X, +Y, −Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PulseLabel {
    #[serde(rename = "+X90")]
    PlusX,
    #[serde(rename = "-X90")]
    MinusX,
    #[serde(rename = "+Y90")]
    PlusY,
    #[serde(rename = "-Y90")]
    MinusY,
}

impl PulseLabel {
    pub const ALL: [PulseLabel; 4] = [
        PulseLabel::PlusX,
        PulseLabel::MinusX,
        PulseLabel::PlusY,
        PulseLabel::MinusY,
    ];

    /// Azimuth of the rotation axis on the equator.
    pub fn axis_phase(self) -> f64 {
        match self {
            PulseLabel::PlusX => 0.0,
            PulseLabel::MinusX => PI,
            PulseLabel::PlusY => FRAC_PI_2,
            PulseLabel::MinusY => 3.0 * FRAC_PI_2,
        }
    }

    /// Ideal π/2 rotation.
    pub fn unitary(self) -> UnitaryOp {
        UnitaryOp::rotation(FRAC_PI_2, self.axis_phase())
    }
}

impl fmt::Display for PulseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PulseLabel::PlusX => "+X90",
            PulseLabel::MinusX => "-X90",
            PulseLabel::PlusY => "+Y90",
            PulseLabel::MinusY => "-Y90",
        };
        f.write_str(s)
    }
}

/// Timing shared by every pulse of a gate set.
///
/// `t_half_pi` is the full pulse duration, ramps included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseTiming {
    pub t_half_pi: f64,
    #[serde(default = "default_ramp")]
    pub ramp_time: f64,
    #[serde(default = "default_gap")]
    pub gap_time: f64,
}

fn default_ramp() -> f64 {
    DEFAULT_RAMP_TIME
}

fn default_gap() -> f64 {
    DEFAULT_GAP_TIME
}

impl PulseTiming {
    pub fn new(t_half_pi: f64) -> Self {
        Self {
            t_half_pi,
            ramp_time: DEFAULT_RAMP_TIME,
            gap_time: DEFAULT_GAP_TIME,
        }
    }

    /// Pulse duration giving a mean Clifford duration of `gate_time` when each
    /// Clifford uses `pulses_per_clifford` pulses on average.
    pub fn from_gate_time(gate_time: f64, pulses_per_clifford: f64) -> Self {
        Self::new(gate_time / pulses_per_clifford - DEFAULT_GAP_TIME)
    }

    /// Wall-clock time of one pulse including the following gap.
    pub fn slot(&self) -> f64 {
        self.t_half_pi + self.gap_time
    }

    pub fn gate_time(&self, pulses_per_clifford: f64) -> f64 {
        pulses_per_clifford * self.slot()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_half_pi > 0.0) || self.ramp_time < 0.0 || self.gap_time < 0.0 {
            return Err(invalid(format!(
                "pulse timing has non-positive or negative entries: {self:?}"
            )));
        }
        if self.t_half_pi <= 2.0 * self.ramp_time {
            return Err(invalid("t_half_pi must exceed twice the ramp time"));
        }
        Ok(())
    }
}

/// One shaped ±π/2 pulse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// Axis azimuth in radians.
    pub phase: f64,
    /// `+1` or `−1`; `−1` flips the axis by π.
    pub sign: i8,
    pub t_half_pi: f64,
    pub ramp_time: f64,
    pub gap_time: f64,
    pub amp_scale: f64,
}

impl PulseSpec {
    pub fn new(label: PulseLabel, timing: &PulseTiming) -> Self {
        Self {
            phase: label.axis_phase(),
            sign: 1,
            t_half_pi: timing.t_half_pi,
            ramp_time: timing.ramp_time,
            gap_time: timing.gap_time,
            amp_scale: 1.0,
        }
    }

    /// A rectangular pulse with no ramps and no trailing gap.
    pub fn square(label: PulseLabel, t_half_pi: f64) -> Self {
        Self {
            ramp_time: 0.0,
            gap_time: 0.0,
            ..Self::new(label, &PulseTiming::new(t_half_pi))
        }
    }

    pub fn with_phase_offset(mut self, offset: f64) -> Self {
        self.phase += offset;
        self
    }

    /// Axis azimuth with the sign folded in.
    pub fn axis_phase(&self) -> f64 {
        if self.sign < 0 {
            self.phase + PI
        } else {
            self.phase
        }
    }

    pub fn flat_time(&self) -> f64 {
        self.t_half_pi - 2.0 * self.ramp_time
    }

    pub fn duration_with_gap(&self) -> f64 {
        self.t_half_pi + self.gap_time
    }

    pub fn ideal(&self) -> UnitaryOp {
        UnitaryOp::rotation(FRAC_PI_2, self.axis_phase())
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_half_pi < 0.0 || self.ramp_time < 0.0 || self.gap_time < 0.0 {
            return Err(crate::error::Error::NegativeDuration {
                what: "pulse duration",
                value: self.t_half_pi.min(self.ramp_time).min(self.gap_time),
            });
        }
        if self.ramp_time > 0.0 && self.t_half_pi <= 2.0 * self.ramp_time {
            return Err(invalid("t_half_pi must exceed twice the ramp time"));
        }
        if !(self.amp_scale > 0.0) {
            return Err(invalid("amp_scale must be positive"));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(invalid("pulse sign must be +1 or -1"));
        }
        Ok(())
    }
}
