// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Errors that accrue with wall-clock time regardless of driving: measurement
//! errors, leakage out of the qubit subspace and symmetric bit flips.
//!
//! A leaked ion is never shelved, so it fluoresces and reads bright. Dark
//! measurement errors and leakage enter every readout in the same way and are
//! carried as one combined rate per prepared state.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Per-second idle error rates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdleRates {
    /// Bright-state measurement error.
    pub eps_b: f64,
    /// Dark measurement error plus leakage out of `|0⟩`.
    pub eps_d_plus_leak0: f64,
    /// Dark measurement error plus leakage out of `|1⟩`.
    pub eps_d_plus_leak1: f64,
    /// Symmetric bit-flip rate.
    pub p_flip: f64,
}

/// Ratio between the short-delay rates that reproduce the idle benchmarking
/// slope and the rates measured with delays of ten seconds and more.
pub const SHORT_DELAY_SCALE: f64 = 0.62e-7 / 13e-6 / (0.5 * 1.6e-2 + 0.25 * (1.3e-2 + 1.2e-2));

impl IdleRates {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Rates from long-delay diagnostic measurements (bit flips nominally zero).
    pub fn long_delay() -> Self {
        Self {
            eps_b: 1.6e-2,
            eps_d_plus_leak0: 1.3e-2,
            eps_d_plus_leak1: 1.2e-2,
            p_flip: 0.0,
        }
    }

    /// Rates on the sub-second timescale of benchmarking sequences.
    pub fn short_delay() -> Self {
        Self::long_delay().scaled(SHORT_DELAY_SCALE)
    }

    /// Bit-flip rate observed with the attenuator ahead of the amplifier.
    pub const FLIP_BEFORE_ATTENUATOR: f64 = 1.9e-7 / 13e-6;

    pub fn scaled(self, k: f64) -> Self {
        Self {
            eps_b: self.eps_b * k,
            eps_d_plus_leak0: self.eps_d_plus_leak0 * k,
            eps_d_plus_leak1: self.eps_d_plus_leak1 * k,
            p_flip: self.p_flip * k,
        }
    }

    pub fn with_flip(self, p_flip: f64) -> Self {
        Self { p_flip, ..self }
    }

    pub fn leak(&self, state: u8) -> f64 {
        if state == 0 {
            self.eps_d_plus_leak0
        } else {
            self.eps_d_plus_leak1
        }
    }

    pub fn is_zero(&self) -> bool {
        self.eps_b == 0.0
            && self.eps_d_plus_leak0 == 0.0
            && self.eps_d_plus_leak1 == 0.0
            && self.p_flip == 0.0
    }

    /// Benchmarking error per second with preparation and shelving randomised:
    /// `½ε_b + ½(ε_d + ½P_0L + ½P_1L) + P_flip`.
    pub fn rb_error_rate(&self) -> f64 {
        0.5 * self.eps_b + 0.25 * (self.eps_d_plus_leak0 + self.eps_d_plus_leak1) + self.p_flip
    }

    pub fn validate(&self) -> Result<()> {
        if [
            self.eps_b,
            self.eps_d_plus_leak0,
            self.eps_d_plus_leak1,
            self.p_flip,
        ]
        .iter()
        .any(|&r| !(r >= 0.0))
        {
            return Err(invalid("idle rates must be non-negative"));
        }
        Ok(())
    }
}

/// Distribution over `{prepared, flipped, leaked}` after an idle period.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdleOutcome {
    pub stay: f64,
    pub flip: f64,
    pub leak: f64,
}

fn linear(rate: f64, delay: f64, what: &str) -> Result<f64> {
    let p = rate * delay;
    if p > 0.5 {
        return Err(Error::ModelValidity(format!(
            "linearised {what} probability {p:.3} exceeds 0.5; delay {delay} s is outside the linear regime"
        )));
    }
    Ok(p)
}

/// Applies the idle channel to a qubit prepared in `prepared` for `delay` s.
///
/// The combined dark-error-plus-leakage term is reported as `leak`, since it
/// acts on every readout exactly like leakage.
pub fn apply_idle_channel(rates: &IdleRates, prepared: u8, delay: f64) -> Result<IdleOutcome> {
    rates.validate()?;
    if delay < 0.0 {
        return Err(Error::NegativeDuration {
            what: "idle delay",
            value: delay,
        });
    }
    let f = linear(rates.p_flip, delay, "bit-flip")?;
    let l = linear(rates.leak(prepared), delay, "leakage")?;
    let l_other = linear(rates.leak(1 - prepared.min(1)), delay, "leakage")?;
    linear(rates.eps_b, delay, "bright-error")?;
    let leak = (1.0 - f) * l + f * l_other;
    let flip = f * (1.0 - l_other);
    Ok(IdleOutcome {
        stay: 1.0 - flip - leak,
        flip,
        leak,
    })
}

/// Which qubit states are shelved (rendered dark) before fluorescence readout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShelveSet {
    /// Nothing shelved.
    None,
    /// The reference state.
    Reference,
    /// The state other than the reference.
    Other,
    /// Both qubit states.
    Both,
}

impl ShelveSet {
    fn contains(self, is_reference: bool) -> bool {
        match self {
            ShelveSet::None => false,
            ShelveSet::Both => true,
            ShelveSet::Reference => is_reference,
            ShelveSet::Other => !is_reference,
        }
    }
}

/// Probability that readout disagrees with the ideal outcome for `reference`.
///
/// Before the idle period the ion is in `reference` with probability
/// `p_reference` and in the other qubit state otherwise. The idle channel then
/// acts for `delay`, the states in `shelve` are rendered dark, and bright
/// outcomes (unshelved or leaked) read dark with probability `ε_b · delay`.
pub fn readout_error_probability(
    rates: &IdleRates,
    delay: f64,
    reference: u8,
    p_reference: f64,
    shelve: ShelveSet,
) -> Result<f64> {
    let from_ref = apply_idle_channel(rates, reference, delay)?;
    let from_other = apply_idle_channel(rates, 1 - reference.min(1), delay)?;
    let q = 1.0 - p_reference;
    let p_ref = p_reference * from_ref.stay + q * from_other.flip;
    let p_oth = p_reference * from_ref.flip + q * from_other.stay;
    let p_leak = p_reference * from_ref.leak + q * from_other.leak;
    let eb = rates.eps_b * delay;

    let mut dark = 0.0;
    let mut bright = p_leak;
    for (p, is_ref) in [(p_ref, true), (p_oth, false)] {
        if shelve.contains(is_ref) {
            dark += p;
        } else {
            bright += p;
        }
    }
    let p_dark = dark + bright * eb;
    Ok(if shelve.contains(true) {
        1.0 - p_dark
    } else {
        p_dark
    })
}
