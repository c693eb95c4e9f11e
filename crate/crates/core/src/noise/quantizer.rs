// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Finite amplitude resolution of the waveform generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizerConfig {
    pub bits: u32,
    /// Optimal amplitude scale `a` of the π/2 pulse.
    pub amp_scale: f64,
}

impl Default for QuantizerConfig {
    fn default() -> Self {
        Self {
            bits: 15,
            amp_scale: 0.24,
        }
    }
}

impl QuantizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bits == 0 || self.bits > 52 {
            return Err(invalid("quantizer bits must lie in 1..=52"));
        }
        if !(self.amp_scale > 0.0 && self.amp_scale <= 1.0) {
            return Err(invalid("amp_scale must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (-(self.bits as f64)).exp2()
    }

    /// Largest relative Rabi offset, `1/(2^(bits+1) a)`.
    pub fn max_relative_offset(&self) -> f64 {
        0.5 * self.step() / self.amp_scale
    }

    /// Error per π/2 pulse from a uniformly distributed rounding offset,
    /// `(1/6)(1/(2^(bits+1) a))²`.
    pub fn error_per_pulse(&self) -> f64 {
        self.max_relative_offset().powi(2) / 6.0
    }
}

/// Rounds `requested ∈ [0, 1]` to the nearest multiple of `2^-bits`.
pub fn quantize_amplitude(config: &QuantizerConfig, requested: f64) -> Result<f64> {
    config.validate()?;
    if !(0.0..=1.0).contains(&requested) {
        return Err(invalid(format!(
            "requested amplitude {requested} outside [0, 1]"
        )));
    }
    let scale = (config.bits as f64).exp2();
    Ok((requested * scale).round() / scale)
}
