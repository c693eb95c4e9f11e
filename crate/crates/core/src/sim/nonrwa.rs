// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Error from the counter-rotating drive term neglected by the rotating-wave
//! approximation.
//!
//! The term oscillates at twice the qubit frequency, so resolving it at the
//! physical frequency is impractical. The pulse is instead simulated at
//! artificially low qubit frequencies, the error fitted to `C (Ω/ω_q)²` and
//! the fit extrapolated.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::UnitaryOp;
use crate::pulse::PulseSpec;

use super::drive::{AmplitudeTrace, DriveParams};
use super::evolve::{pulse_segments, segments_propagator, Segment};
use super::fidelity::avg_state_infidelity;

const STEPS_PER_CYCLE: usize = 32;

/// Pulse error caused by the counter-rotating term at qubit frequency
/// `omega_q_scaled` (rad/s). With `include_term` false the error is zero by
/// construction, which serves as a control.
pub fn counter_rotating_error(
    pulse: &PulseSpec,
    drive: &DriveParams,
    omega_q_scaled: f64,
    include_term: bool,
) -> Result<f64> {
    pulse.validate()?;
    let peak = drive.omega_q * pulse.amp_scale;
    if omega_q_scaled < 10.0 * peak {
        return Err(invalid(format!(
            "scaled qubit frequency {omega_q_scaled:.3e} rad/s is below ten times the Rabi frequency {peak:.3e} rad/s"
        )));
    }
    let spec = PulseSpec {
        gap_time: 0.0,
        ..*pulse
    };
    let mut segments = Vec::new();
    pulse_segments(
        &spec,
        drive,
        &AmplitudeTrace::unity(),
        0.0,
        0.0,
        &mut segments,
    );
    let ideal = segments_propagator(&segments);
    if !include_term {
        return Ok(avg_state_infidelity(&ideal, &ideal));
    }

    // Fourth-order Magnus steps on Gauss points; a plain midpoint rule leaves
    // a discretisation error that itself scales like Ω/ω_q.
    let step = 2.0 * PI / (2.0 * omega_q_scaled) / STEPS_PER_CYCLE as f64;
    let field = |seg: &Segment, t: f64| -> [f64; 3] {
        let cr = -seg.phase - 2.0 * omega_q_scaled * t;
        [
            seg.rabi * (seg.phase.cos() + cr.cos()),
            seg.rabi * (seg.phase.sin() + cr.sin()),
            seg.delta,
        ]
    };
    let gauss = 0.5 / 3f64.sqrt();
    let mut u = UnitaryOp::identity();
    let mut t = 0.0;
    for seg in &segments {
        let n = (seg.dt / step).ceil().max(1.0) as usize;
        let h = seg.dt / n as f64;
        for k in 0..n {
            let tm = t + (k as f64 + 0.5) * h;
            let v1 = field(seg, tm - gauss * h);
            let v2 = field(seg, tm + gauss * h);
            let c = 3f64.sqrt() / 12.0 * h;
            let cross = [
                v2[1] * v1[2] - v2[2] * v1[1],
                v2[2] * v1[0] - v2[0] * v1[2],
                v2[0] * v1[1] - v2[1] * v1[0],
            ];
            let w: [f64; 3] = std::array::from_fn(|i| 0.5 * (v1[i] + v2[i]) + c * cross[i]);
            u = UnitaryOp::from_segment(w[0].hypot(w[1]), w[1].atan2(w[0]), w[2], h) * u;
        }
        t += seg.dt;
    }
    Ok(avg_state_infidelity(&ideal, &u))
}

/// Result of the scaling fit `error ≈ C (Ω/ω_q)²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterRotatingFit {
    pub coefficient: f64,
    /// `(Ω/ω_q, error)` pairs that were simulated.
    pub samples: Vec<(f64, f64)>,
    /// Error at the physical ratio.
    pub extrapolated: f64,
}

/// Simulates at qubit frequencies `ratio · Ω` for each entry of `ratios`,
/// snapped so that whole cycles of the `2ω_q` term fit in the pulse, then fits
/// and extrapolates to `omega_q_physical`.
pub fn counter_rotating_extrapolate(
    pulse: &PulseSpec,
    drive: &DriveParams,
    ratios: &[f64],
    omega_q_physical: f64,
) -> Result<CounterRotatingFit> {
    if ratios.is_empty() {
        return Err(invalid("need at least one frequency ratio"));
    }
    let peak = drive.omega_q * pulse.amp_scale;
    let mut samples = Vec::with_capacity(ratios.len());
    for &r in ratios {
        let cycles = (r * peak * pulse.t_half_pi / PI).round().max(1.0);
        let omega = cycles * PI / pulse.t_half_pi;
        let err = counter_rotating_error(pulse, drive, omega, true)?;
        samples.push((peak / omega, err));
    }
    // Least squares through the origin in x = (Ω/ω_q)².
    let (num, den) = samples
        .iter()
        .fold((0.0, 0.0), |(n, d), &(x, e)| (n + x * x * e, d + x.powi(4)));
    let coefficient = num / den;
    let physical = peak / omega_q_physical;
    Ok(CounterRotatingFit {
        coefficient,
        samples,
        extrapolated: coefficient * physical * physical,
    })
}
