// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Slow drift of the drive-chain gain with periodically interleaved
//! amplitude calibrations, and the resulting amplitude error per Clifford.

use serde::{Deserialize, Serialize};

use crate::clifford::CliffordGroup;
use crate::error::{invalid, Result};
use crate::noise::rng::StreamKey;

use super::amplitude::{amplitude_cal_loop, CalLoopConfig};
use super::target::CalTarget;
use super::trace::{CalKind, CalRecord};

/// Error of one π/2 pulse with relative amplitude offset `offset`, `½ offset²`.
pub fn amplitude_error_per_pulse(offset: f64) -> f64 {
    0.5 * offset * offset
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftScenario {
    /// Gain drift rate, relative per second.
    pub drift_rate: f64,
    /// Length of the benchmarking session in seconds.
    pub duration: f64,
    /// Time between calibrations in seconds.
    #[serde(default = "default_interval")]
    pub cal_interval: f64,
}

fn default_interval() -> f64 {
    60.0
}

impl DriftScenario {
    /// Linear drift whose uncalibrated error per Clifford is 1.4e-7 over half an hour.
    pub fn reference() -> Self {
        let duration = 1800.0;
        let ppc = CliffordGroup::shared().pulses_per_clifford();
        let mean_sq = 1.4e-7 / (0.5 * ppc);
        Self {
            drift_rate: (3.0 * mean_sq).sqrt() / duration,
            duration,
            cal_interval: default_interval(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.cal_interval > 0.0) || !self.drift_rate.is_finite() {
            return Err(invalid(
                "drift scenario needs positive duration and interval",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftOutcome {
    /// Time-averaged amplitude error per Clifford.
    pub error_per_clifford: f64,
    /// RMS relative amplitude offset over the session.
    pub rms_offset: f64,
    pub records: Vec<CalRecord>,
}

/// Mean of the square of a linear function over an interval.
fn mean_square(a: f64, b: f64) -> f64 {
    (a * a + a * b + b * b) / 3.0
}

/// Simulates a session starting from `target` with a linearly drifting gain.
/// With `calibrate` set, the amplitude loop runs at `t = 0` and then every
/// `cal_interval`.
pub fn run_amplitude_drift(
    scenario: &DriftScenario,
    loop_config: &CalLoopConfig,
    target: &CalTarget,
    calibrate: bool,
    seed: u64,
) -> Result<DriftOutcome> {
    scenario.validate()?;
    let mut target = target.clone();
    let base_drift = target.gain_drift;
    let mut records = Vec::new();
    let mut weighted = 0.0;
    let mut t = 0.0;
    let mut index = 0u64;
    while t < scenario.duration {
        target.gain_drift = base_drift + scenario.drift_rate * t;
        if calibrate {
            let key = StreamKey::new(seed).pulse(index);
            records.extend(amplitude_cal_loop(loop_config, &mut target, key, t)?.records);
        }
        let end = (t + scenario.cal_interval).min(scenario.duration);
        let start_offset = target.amplitude_offset();
        let scale = target.setting / target.nominal_setting;
        let end_offset = scale * (1.0 + base_drift + scenario.drift_rate * end) - 1.0;
        weighted += (end - t) * mean_square(start_offset, end_offset);
        t = end;
        index += 1;
    }
    let mean_sq = weighted / scenario.duration;
    let ppc = CliffordGroup::shared().pulses_per_clifford();
    Ok(DriftOutcome {
        error_per_clifford: ppc * 0.5 * mean_sq,
        rms_offset: mean_sq.sqrt(),
        records,
    })
}

/// Drift error inferred from a calibration log alone. The net correction of
/// each calibration is taken as the offset accrued linearly since the
/// previous one.
pub fn drift_error_from_log(records: &[CalRecord], pulses_per_clifford: f64) -> Result<f64> {
    let mut sessions: Vec<(f64, f64)> = Vec::new();
    for r in records.iter().filter(|r| r.kind == CalKind::Amplitude) {
        match sessions.last_mut() {
            Some(last) if last.0 == r.time => last.1 += r.correction,
            _ => sessions.push((r.time, r.correction)),
        }
    }
    if sessions.len() < 2 {
        return Err(invalid("drift accounting needs at least two calibrations"));
    }
    let span = sessions.last().map_or(0.0, |s| s.0) - sessions[0].0;
    if !(span > 0.0) {
        return Err(invalid("calibrations must be spread in time"));
    }
    let weighted: f64 = sessions
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * w[1].1 * w[1].1 / 3.0)
        .sum();
    Ok(pulses_per_clifford * amplitude_error_per_pulse((weighted / span).sqrt()))
}
