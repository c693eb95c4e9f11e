// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Polynomial amplitude offset `Σ_k Ω_k t^k` drawn afresh each shot.
///
/// Coefficients are relative to the nominal Rabi frequency Ω_q, in units of
/// `s^-k`. Each `Ω_k` is Gaussian with mean `mu[k]` and deviation `sigma[k]`;
/// a missing entry counts as zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeNoiseModel {
    #[serde(default)]
    pub mu: Vec<f64>,
    #[serde(default)]
    pub sigma: Vec<f64>,
}

impl AmplitudeNoiseModel {
    /// Shot-to-shot Gaussian offset of the constant term only.
    pub fn shot_to_shot(sigma0: f64) -> Self {
        Self {
            mu: vec![0.0],
            sigma: vec![sigma0],
        }
    }

    pub fn order(&self) -> usize {
        self.mu.len().max(self.sigma.len())
    }

    pub fn is_zero(&self) -> bool {
        self.mu.iter().chain(&self.sigma).all(|&v| v == 0.0)
    }

    /// True when every shot sees the same coefficients.
    pub fn is_deterministic(&self) -> bool {
        self.sigma.iter().all(|&s| s == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma.iter().any(|&s| !(s >= 0.0)) {
            return Err(invalid("amplitude sigma entries must be non-negative"));
        }
        if self.mu.iter().any(|m| !m.is_finite()) {
            return Err(invalid("amplitude mu entries must be finite"));
        }
        Ok(())
    }
}

/// Draws the per-shot polynomial coefficients.
pub fn sample_shot_amplitude<R: Rng + ?Sized>(
    model: &AmplitudeNoiseModel,
    rng: &mut R,
) -> Vec<f64> {
    (0..model.order())
        .map(|k| {
            let mu = model.mu.get(k).copied().unwrap_or(0.0);
            let sigma = model.sigma.get(k).copied().unwrap_or(0.0);
            let z: f64 = StandardNormal.sample(rng);
            if sigma == 0.0 {
                mu
            } else {
                mu + sigma * z
            }
        })
        .collect()
}
