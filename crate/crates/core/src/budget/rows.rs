// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form error per Clifford for each mechanism.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::calibration::{amplitude_error_per_pulse, drift_error_from_log, CalRecord};
use crate::error::{invalid, Result};
use crate::noise::{IdleRates, MotionalModel, QuantizerConfig};

/// White dephasing during the pulses, `ppc · (1/3) · t_half_pi / T2`. The
/// factor 1/3 averages the dephasing over the Bloch sphere.
pub fn err_decoherence(pulses_per_clifford: f64, t_half_pi: f64, t2: f64) -> Result<f64> {
    if !(t2 > 0.0) {
        return Err(invalid("T2 must be positive"));
    }
    if !(t_half_pi >= 0.0) {
        return Err(invalid("t_half_pi must be non-negative"));
    }
    Ok(pulses_per_clifford / 3.0 * t_half_pi / t2)
}

/// Rabi modulation by the heated motional mode, with the per-pulse envelope
/// averaged over the linear growth of `n̄` across a sequence lasting
/// `sequence_duration` seconds. The envelope is linear in `n̄`, so the average
/// is the envelope at the mid-sequence occupation.
pub fn err_harmonic(
    model: &MotionalModel,
    pulses_per_clifford: f64,
    t_half_pi: f64,
    sequence_duration: f64,
) -> Result<f64> {
    model.validate()?;
    if !(t_half_pi > 0.0) {
        return Err(invalid("t_half_pi must be positive"));
    }
    if !(sequence_duration >= 0.0) {
        return Err(invalid("sequence duration must be non-negative"));
    }
    if model.eta == 0.0 {
        return Ok(0.0);
    }
    let n_mid = model.n_bar(0.5 * sequence_duration);
    Ok(pulses_per_clifford * model.envelope_error(n_mid, t_half_pi))
}

/// Shot-to-shot amplitude noise with relative width `sigma`, `ppc · ½σ²`.
pub fn err_amp_noise(pulses_per_clifford: f64, sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(invalid("amplitude noise width must be non-negative"));
    }
    Ok(pulses_per_clifford * amplitude_error_per_pulse(sigma))
}

/// Residual amplitude drift between calibrations, from a calibration log.
/// The offset is taken to grow linearly between setpoints.
pub fn err_amp_drift(records: &[CalRecord], pulses_per_clifford: f64) -> Result<f64> {
    drift_error_from_log(records, pulses_per_clifford)
}

/// Which duration enters the residual ac Zeeman error.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeemanTime {
    /// The π/2 pulse length including ramps.
    #[default]
    HalfPi,
    /// The pulse slot, pulse plus inter-pulse gap.
    Slot,
}

/// Uncorrected ac Zeeman shift `residual_hz`, `ppc · 2π (t Δ)²`.
pub fn err_zeeman(pulses_per_clifford: f64, residual_hz: f64, t: f64) -> Result<f64> {
    if !residual_hz.is_finite() || !(t >= 0.0) {
        return Err(invalid("Zeeman residual must be finite and time non-negative"));
    }
    Ok(pulses_per_clifford * TAU * (t * residual_hz).powi(2))
}

/// Finite amplitude resolution of the waveform generator.
pub fn err_awg(pulses_per_clifford: f64, config: &QuantizerConfig) -> Result<f64> {
    config.validate()?;
    Ok(pulses_per_clifford * config.error_per_pulse())
}

/// Idle errors accrued over one Clifford of wall-clock length `gate_time`.
pub fn leakage_rb_error(rates: &IdleRates, gate_time: f64) -> Result<f64> {
    rates.validate()?;
    if !(gate_time >= 0.0) {
        return Err(invalid("gate time must be non-negative"));
    }
    Ok(rates.rb_error_rate() * gate_time)
}

/// Attenuation placed after the drive amplifier in the improved chain, in dB.
pub const POST_AMPLIFIER_ATTENUATION_DB: f64 = 22.0;

/// Bit-flip rate once the amplifier noise reaching the ion is attenuated by
/// `attenuation_db`. Flips are driven by noise power at the qubit frequency.
pub fn attenuated_flip_rate(flip_rate: f64, attenuation_db: f64) -> f64 {
    flip_rate * 10f64.powf(-attenuation_db / 10.0)
}
