// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Amplitude calibration by trains of `4N + 1` π/2 pulses.
//!
//! `4N` pulses make `N` full turns, so an offset ε = Ω0/Ω_q leaves a net
//! rotation `2πNε`. The final π/2 pulse moves the state to the equator, where
//! `P(|0⟩) = ½(1 − sin θ)` with `θ = π(2N + ½)ε` is odd in ε.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::noise::rng::StreamKey;
use crate::pulse::PulseLabel;

use super::target::{CalTarget, Measurement, PulseTrain};
use super::trace::{CalKind, CalRecord};

/// Deviations of `P(|0⟩)` from ½ beyond this are outside the linear regime.
pub const LINEAR_LIMIT: f64 = 0.35;

/// Schedule of a closed calibration loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalLoopConfig {
    pub n_start: u64,
    /// Factor by which N grows after a step without significant signal.
    pub growth: f64,
    /// A step triggers a correction once `|P − ½|` reaches `p_threshold − ½`.
    pub p_threshold: f64,
    pub shots_per_point: u64,
    /// Longest pulse train allowed.
    pub max_pulses: u64,
    /// A step also triggers once `|P − ½|` exceeds this many standard errors.
    pub significance: f64,
    /// Corrections after which the loop gives up.
    pub max_corrections: usize,
}

impl Default for CalLoopConfig {
    fn default() -> Self {
        Self {
            n_start: 1,
            growth: 2.0,
            p_threshold: 0.8,
            shots_per_point: 100,
            max_pulses: 15_000,
            significance: 3.0,
            max_corrections: 12,
        }
    }
}

impl CalLoopConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.growth > 1.0) {
            return Err(invalid("growth must exceed 1"));
        }
        if !(self.p_threshold > 0.5 && self.p_threshold < 1.0) {
            return Err(invalid("p_threshold must lie in (0.5, 1)"));
        }
        if self.n_start == 0 || self.shots_per_point == 0 || self.max_corrections == 0 {
            return Err(invalid(
                "n_start, shots_per_point and max_corrections must be positive",
            ));
        }
        if !(self.significance > 0.0) {
            return Err(invalid("significance must be positive"));
        }
        Ok(())
    }

    /// True when a deviation should trigger a correction.
    pub(crate) fn triggers(&self, m: &Measurement) -> bool {
        let dev = (m.p0() - 0.5).abs();
        dev >= self.p_threshold - 0.5 || dev > self.significance * m.std_error()
    }

    pub(crate) fn next_n(&self, n: u64) -> u64 {
        ((n as f64 * self.growth).round() as u64).max(n + 1)
    }
}

pub fn amplitude_train(n: u64) -> PulseTrain {
    vec![(PulseLabel::PlusX, 4 * n + 1)]
}

/// Relative offset that produces `p0` after a train with `n` groups.
///
/// Errors when `p0` lies outside the linear regime.
pub fn invert_amplitude(p0: f64, n: u64) -> Result<f64> {
    let dev = p0 - 0.5;
    if dev.abs() > LINEAR_LIMIT {
        return Err(Error::OutsideLinearRegime { deviation: dev });
    }
    Ok(invert_amplitude_unchecked(p0, n))
}

fn invert_amplitude_unchecked(p0: f64, n: u64) -> f64 {
    let s = (1.0 - 2.0 * p0).clamp(-1.0, 1.0);
    s.asin() / (PI * (2.0 * n as f64 + 0.5))
}

/// Result of a single amplitude measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeStep {
    pub n: u64,
    pub measurement: Measurement,
    /// Relative offset Ω0/Ω_q.
    pub estimate: f64,
}

/// Measures the amplitude offset with `4n + 1` pulses.
pub fn amplitude_cal_step(
    n: u64,
    target: &CalTarget,
    shots: u64,
    key: StreamKey,
) -> Result<AmplitudeStep> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let measurement = target.measure(&amplitude_train(n), shots, key)?;
    let estimate = invert_amplitude(measurement.p0(), n)?;
    Ok(AmplitudeStep {
        n,
        measurement,
        estimate,
    })
}

/// Outcome of one closed amplitude calibration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeLoopResult {
    /// Programmed AWG amplitude after the loop.
    pub setting: f64,
    pub records: Vec<CalRecord>,
    pub corrections: usize,
    /// Smallest relative offset the final step could have detected.
    pub residual_bound: f64,
    /// The loop stopped because the correction was below one AWG step.
    #[serde(default)]
    pub resolution_limited: bool,
}

/// Lengthens the train until the signal is significant, corrects, and carries
/// on until `max_pulses` is reached without a significant signal.
pub fn amplitude_cal_loop(
    config: &CalLoopConfig,
    target: &mut CalTarget,
    key: StreamKey,
    time: f64,
) -> Result<AmplitudeLoopResult> {
    config.validate()?;
    let mut records = Vec::new();
    let mut corrections = 0;
    let mut n = config.n_start;
    let mut step = 0u64;
    let mut last_n = n;
    let mut resolution_limited = false;
    while 4 * n < config.max_pulses {
        let m = target.measure(
            &amplitude_train(n),
            config.shots_per_point,
            key.sequence(step),
        )?;
        step += 1;
        last_n = n;
        let estimate = invert_amplitude_unchecked(m.p0(), n);
        if config.triggers(&m) {
            if corrections == config.max_corrections {
                return Err(Error::NonConvergence {
                    what: "amplitude calibration",
                    detail: format!("{corrections} corrections without settling"),
                });
            }
            let before = target.setting;
            target.correct_amplitude(estimate)?;
            if target.setting == before {
                records.push(CalRecord {
                    kind: CalKind::Amplitude,
                    time,
                    n,
                    p0: m.p0(),
                    estimate,
                    correction: 0.0,
                });
                resolution_limited = true;
                break;
            }
            corrections += 1;
            records.push(CalRecord {
                kind: CalKind::Amplitude,
                time,
                n,
                p0: m.p0(),
                estimate,
                correction: estimate,
            });
            // Past the linear regime the estimate is only a first step; restart short.
            if (m.p0() - 0.5).abs() > LINEAR_LIMIT {
                n = config.n_start;
            }
        } else {
            records.push(CalRecord {
                kind: CalKind::Amplitude,
                time,
                n,
                p0: m.p0(),
                estimate,
                correction: 0.0,
            });
            n = config.next_n(n);
        }
    }
    let sensitivity = PI * (2.0 * last_n as f64 + 0.5);
    let residual_bound =
        2.0 * config.significance * 0.5 / (config.shots_per_point as f64).sqrt() / sensitivity;
    Ok(AmplitudeLoopResult {
        setting: target.setting,
        records,
        corrections,
        residual_bound: if resolution_limited {
            residual_bound.max(target.quantizer.max_relative_offset())
        } else {
            residual_bound
        },
        resolution_limited,
    })
}
