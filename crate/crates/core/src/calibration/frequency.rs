// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Frequency calibration by trains of `+X, −X` π/2 pairs closed by a `+Y` π/2.
//!
//! Each pair cancels in the absence of detuning. A detuning leaves a small
//! rotation per pair that the final `+Y` pulse converts into a population
//! imbalance, odd in the detuning.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::clifford::CliffordGroup;
use crate::error::{Error, Result};
use crate::linalg::{QubitState, UnitaryOp};
use crate::noise::rng::StreamKey;
use crate::optim::newton_bracketed;
use crate::pulse::{PulseLabel, PulseSpec};
use crate::sim::{avg_pulse_error, pulse_propagator, Perturbation, PulseNoise, ZeemanModel};

use super::amplitude::{CalLoopConfig, LINEAR_LIMIT};
use super::target::{CalTarget, Measurement, PulseTrain};
use super::trace::{CalKind, CalRecord};

pub fn pair_train(pairs: u64, closing_y: bool) -> PulseTrain {
    let mut train: PulseTrain = (0..pairs)
        .flat_map(|_| [(PulseLabel::PlusX, 1), (PulseLabel::MinusX, 1)])
        .collect();
    if closing_y {
        train.push((PulseLabel::PlusY, 1));
    }
    train
}

/// `P(|0⟩)` after `pairs` pairs and the closing `+Y` pulse for an otherwise
/// ideal target with uniform detuning `delta` (rad/s).
fn model_p0(target: &CalTarget, pairs: u64, delta: f64) -> Result<f64> {
    let drive = crate::sim::DriveParams {
        detuning: delta,
        zeeman: ZeemanModel::default(),
        ..target.drive
    };
    let noise = PulseNoise::default();
    let prop =
        |label| pulse_propagator(&PulseSpec::new(label, &target.timing), &drive, &noise, 0.0);
    let pair = prop(PulseLabel::MinusX)? * prop(PulseLabel::PlusX)?;
    let u: UnitaryOp = prop(PulseLabel::PlusY)? * pair.pow(pairs);
    Ok(u.apply(&QubitState::basis(0)).probability(0))
}

/// Detuning in Hz that explains `p0` after `pairs` pairs, found by Newton
/// iteration on the exact propagator product.
pub fn invert_frequency(target: &CalTarget, pairs: u64, p0: f64) -> Result<f64> {
    let dev = p0 - 0.5;
    if dev.abs() > LINEAR_LIMIT {
        return Err(Error::OutsideLinearRegime { deviation: dev });
    }
    invert_frequency_unchecked(target, pairs, p0)
}

fn invert_frequency_unchecked(target: &CalTarget, pairs: u64, p0: f64) -> Result<f64> {
    // Linear sensitivity at zero sets the bracket.
    let mut h = 1e-3 / (pairs as f64 * target.timing.slot());
    let mut slope = 0.0;
    for _ in 0..8 {
        slope = (model_p0(target, pairs, h)? - model_p0(target, pairs, -h)?) / (2.0 * h);
        if slope != 0.0 {
            break;
        }
        h *= 10.0;
    }
    if slope == 0.0 || !slope.is_finite() {
        return Err(Error::NonConvergence {
            what: "frequency inversion",
            detail: "no sensitivity to detuning".into(),
        });
    }
    // Walk outward along the side the deviation points to until the model
    // crosses the target or turns over; the response saturates below ½ ± ½.
    let target_p = p0.clamp(0.5 - 0.499, 0.5 + 0.499);
    let f = |d: f64| model_p0(target, pairs, d).unwrap_or(f64::NAN) - target_p;
    let dir = if (p0 - 0.5) * slope >= 0.0 { 1.0 } else { -1.0 };
    let step = 0.05 / slope.abs();
    let (mut lo, mut flo) = (0.0, f(0.0));
    let mut hi = lo;
    let mut bracketed = flo == 0.0;
    for i in 1..=200 {
        let x = dir * step * i as f64;
        let fx = f(x);
        if fx.signum() != flo.signum() {
            hi = x;
            bracketed = true;
            break;
        }
        if (fx - flo) * dir * slope.signum() <= 0.0 {
            // Past the extremum without reaching the target.
            break;
        }
        lo = x;
        flo = fx;
    }
    if !bracketed {
        return Ok(lo / TAU);
    }
    let df = |d: f64| {
        let e = 1e-3 * step;
        (f(d + e) - f(d - e)) / (2.0 * e)
    };
    let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let root = newton_bracketed(f, df, a, b, 1e-12).unwrap_or(lo);
    Ok(root / TAU)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyStep {
    pub pairs: u64,
    pub measurement: Measurement,
    /// Effective detuning in Hz.
    pub estimate_hz: f64,
}

/// Measures the effective detuning with `pairs` pulse pairs.
pub fn frequency_cal_step(
    pairs: u64,
    target: &CalTarget,
    shots: u64,
    key: StreamKey,
) -> Result<FrequencyStep> {
    if pairs == 0 {
        return Err(crate::error::invalid("pairs must be at least 1"));
    }
    let measurement = target.measure(&pair_train(pairs, true), shots, key)?;
    let estimate_hz = invert_frequency(target, pairs, measurement.p0())?;
    Ok(FrequencyStep {
        pairs,
        measurement,
        estimate_hz,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyLoopResult {
    /// Drive detuning after the loop, in Hz.
    pub detuning_hz: f64,
    pub records: Vec<CalRecord>,
    pub corrections: usize,
    /// Smallest effective detuning in Hz the final step could have detected.
    pub residual_bound_hz: f64,
}

/// Exponential-N frequency loop; corrections shift the drive detuning.
pub fn frequency_cal_loop(
    config: &CalLoopConfig,
    target: &mut CalTarget,
    key: StreamKey,
    time: f64,
) -> Result<FrequencyLoopResult> {
    config.validate()?;
    let mut records = Vec::new();
    let mut corrections = 0;
    let mut n = config.n_start;
    let mut last_n = n;
    let mut step = 0u64;
    while 2 * n < config.max_pulses {
        let m = target.measure(
            &pair_train(n, true),
            config.shots_per_point,
            key.sequence(step),
        )?;
        step += 1;
        last_n = n;
        let estimate = invert_frequency_unchecked(target, n, m.p0())?;
        if config.triggers(&m) {
            if corrections == config.max_corrections {
                return Err(Error::NonConvergence {
                    what: "frequency calibration",
                    detail: format!("{corrections} corrections without settling"),
                });
            }
            target.drive.detuning -= TAU * estimate;
            corrections += 1;
            records.push(CalRecord {
                kind: CalKind::Frequency,
                time,
                n,
                p0: m.p0(),
                estimate,
                correction: -estimate,
            });
            if (m.p0() - 0.5).abs() > LINEAR_LIMIT {
                n = config.n_start;
            }
        } else {
            records.push(CalRecord {
                kind: CalKind::Frequency,
                time,
                n,
                p0: m.p0(),
                estimate,
                correction: 0.0,
            });
            n = config.next_n(n);
        }
    }
    let dev = config.significance * 0.5 / (config.shots_per_point as f64).sqrt();
    let residual_bound_hz = invert_frequency_unchecked(target, last_n, 0.5 + dev)?.abs();
    Ok(FrequencyLoopResult {
        detuning_hz: target.drive.detuning / TAU,
        records,
        corrections,
        residual_bound_hz,
    })
}

/// Coherent error per Clifford of the target's pulses with their current
/// amplitude and frequency settings, averaged over the four pulse labels.
pub fn coherent_error_per_clifford(target: &CalTarget) -> Result<f64> {
    let mut total = 0.0;
    for label in PulseLabel::ALL {
        let spec = PulseSpec {
            amp_scale: target.relative_amplitude(),
            ..PulseSpec::new(label, &target.timing)
        };
        total += avg_pulse_error(&label.unitary(), &spec, &target.drive, &Perturbation::None)?;
    }
    Ok(total / 4.0 * CliffordGroup::shared().pulses_per_clifford())
}
