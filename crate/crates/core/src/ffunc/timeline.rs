// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Piecewise-constant control sequences seen by dephasing noise.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{So3, UnitaryOp};
use crate::pulse::{PulseLabel, PulseTiming};

/// One interval of constant drive; `rabi = 0` is free evolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    /// Drive axis azimuth in radians.
    pub phase: f64,
    /// Rabi rate in rad/s.
    pub rabi: f64,
}

impl Segment {
    pub fn free(duration: f64) -> Self {
        Self {
            duration,
            phase: 0.0,
            rabi: 0.0,
        }
    }

    /// Rotation by `angle` about the axis at `phase`, taking `duration`.
    pub fn rotation(angle: f64, phase: f64, duration: f64) -> Self {
        Self {
            duration,
            phase,
            rabi: angle / duration,
        }
    }

    pub fn so3(&self) -> So3 {
        UnitaryOp::rotation(self.rabi * self.duration, self.phase).to_so3()
    }
}

/// A control sequence and the Bloch axis of the state it starts from.
///
/// Dephasing is only harmful through the components of the toggling-frame
/// `σz` perpendicular to that initial axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlTimeline {
    segments: Vec<Segment>,
    initial_axis: [f64; 3],
}

impl ControlTimeline {
    pub fn new(segments: Vec<Segment>, initial_axis: [f64; 3]) -> Result<Self> {
        if segments.is_empty() {
            return Err(invalid("timeline has no segments"));
        }
        for s in &segments {
            if !(s.duration > 0.0) || !s.duration.is_finite() {
                return Err(invalid(format!(
                    "segment duration {} is not positive",
                    s.duration
                )));
            }
            if !(s.rabi >= 0.0) || !s.rabi.is_finite() || !s.phase.is_finite() {
                return Err(invalid("segment rate must be finite and non-negative"));
            }
        }
        let n = initial_axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(invalid("initial axis must be a non-zero vector"));
        }
        Ok(Self {
            segments,
            initial_axis: initial_axis.map(|x| x / n),
        })
    }

    /// Free precession of an equatorial state, the idealised Ramsey experiment.
    pub fn ramsey(tau: f64) -> Result<Self> {
        Self::new(vec![Segment::free(tau)], [1.0, 0.0, 0.0])
    }

    /// Hahn echo on an equatorial state: `τ/2`, a π pulse of length `t_pi`
    /// about the state's own axis, then `τ/2`.
    pub fn spin_echo(tau: f64, t_pi: f64) -> Result<Self> {
        Self::new(
            vec![
                Segment::free(0.5 * tau),
                Segment::rotation(PI, 0.0, t_pi),
                Segment::free(0.5 * tau),
            ],
            [1.0, 0.0, 0.0],
        )
    }

    /// Rectangular π/2 pulses of length `t_half_pi`, each followed by the gap
    /// and `delay` of free evolution, starting from `|prepared⟩`.
    pub fn from_pulses(
        pulses: impl IntoIterator<Item = PulseLabel>,
        timing: &PulseTiming,
        delay: f64,
        prepared: u8,
    ) -> Result<Self> {
        if delay < 0.0 {
            return Err(invalid("delay must be non-negative"));
        }
        let idle = timing.gap_time + delay;
        let mut segments = Vec::new();
        for p in pulses {
            segments.push(Segment::rotation(
                FRAC_PI_2,
                p.axis_phase(),
                timing.t_half_pi,
            ));
            if idle > 0.0 {
                segments.push(Segment::free(idle));
            }
        }
        let z = if prepared == 0 { 1.0 } else { -1.0 };
        Self::new(segments, [0.0, 0.0, z])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn initial_axis(&self) -> [f64; 3] {
        self.initial_axis
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}
