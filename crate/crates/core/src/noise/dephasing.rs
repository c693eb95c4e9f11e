// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-domain synthesis of qubit-frequency noise from a phase PSD.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Tones per decade of angular frequency.
pub const TONES_PER_DECADE: usize = 64;

/// A sum of cosines representing one realisation of frequency noise,
/// `δ(t) = Σ_j a_j cos(ω_j t + θ_j)` in rad/s.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTrajectory {
    pub omegas: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

impl FrequencyTrajectory {
    pub fn frequency(&self, t: f64) -> f64 {
        self.omegas
            .iter()
            .zip(&self.amplitudes)
            .zip(&self.phases)
            .map(|((w, a), p)| a * (w * t + p).cos())
            .sum()
    }

    /// Accumulated phase `∫_{t0}^{t1} δ(t) dt`, evaluated exactly.
    pub fn phase(&self, t0: f64, t1: f64) -> f64 {
        self.omegas
            .iter()
            .zip(&self.amplitudes)
            .zip(&self.phases)
            .map(|((w, a), p)| a / w * ((w * t1 + p).sin() - (w * t0 + p).sin()))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(|&a| a == 0.0)
    }
}

/// Log-spaced tone frequencies and their bandwidths across `[omega_min, omega_max]`.
pub fn tone_grid(omega_min: f64, omega_max: f64) -> Vec<(f64, f64)> {
    let decades = (omega_max / omega_min).log10();
    let n = ((decades * TONES_PER_DECADE as f64).ceil() as usize).max(1);
    let ratio = (omega_max / omega_min).powf(1.0 / n as f64);
    (0..n)
        .map(|j| {
            let lo = omega_min * ratio.powi(j as i32);
            let hi = lo * ratio;
            ((lo * hi).sqrt(), hi - lo)
        })
        .collect()
}

/// Draws one frequency-noise trajectory whose one-sided spectrum matches the
/// phase PSD `s_phi(ω)` (rad²/Hz) across `[omega_min, omega_max]`.
///
/// Each tone carries the power of its band: `a_j² / 2 = ω_j² S_φ(ω_j) Δf_j`.
pub fn dephasing_trajectory<R: Rng + ?Sized>(
    s_phi: &dyn Fn(f64) -> f64,
    omega_min: f64,
    omega_max: f64,
    rng: &mut R,
) -> Result<FrequencyTrajectory> {
    if !(omega_min > 0.0 && omega_max > omega_min) {
        return Err(invalid(
            "trajectory band must satisfy 0 < omega_min < omega_max",
        ));
    }
    let mut traj = FrequencyTrajectory::default();
    for (w, dw) in tone_grid(omega_min, omega_max) {
        let s = s_phi(w);
        if !(s >= 0.0) {
            return Err(invalid(format!(
                "phase PSD is negative or undefined at {w:.3e} rad/s"
            )));
        }
        let df = dw / TAU;
        traj.omegas.push(w);
        traj.amplitudes.push((2.0 * w * w * s * df).sqrt());
        traj.phases.push(rng.random_range(0.0..TAU));
    }
    Ok(traj)
}
