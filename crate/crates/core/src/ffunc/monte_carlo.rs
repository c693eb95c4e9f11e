// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Trajectory Monte-Carlo of Ramsey decay, independent of the filter-function
//! pipeline.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::noise::dephasing_trajectory;
use crate::noise::rng::{purpose, StreamKey};

use super::psd::PhasePsd;

/// Mean Ramsey fidelity `½(1 + cos Φ(τ))` at each `tau`, averaged over
/// `trajectories` realisations synthesised across `band` (rad/s).
pub fn ramsey_monte_carlo(
    psd: &PhasePsd,
    taus: &[f64],
    band: (f64, f64),
    trajectories: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if trajectories == 0 {
        return Err(invalid("Monte-Carlo needs at least one trajectory"));
    }
    if taus.iter().any(|&t| !(t >= 0.0)) {
        return Err(invalid("Ramsey times must be non-negative"));
    }
    let key = StreamKey::new(seed);
    let s_phi = |w: f64| psd.value(w);
    let sums = (0..trajectories)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let traj = dephasing_trajectory(
                &s_phi,
                band.0,
                band.1,
                &mut key.shot(i as u64).rng(purpose::TRAJECTORY),
            )?;
            Ok(taus.iter().map(|&t| traj.phase(0.0, t).cos()).collect())
        })
        .try_reduce(
            || vec![0.0; taus.len()],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(sums
        .into_iter()
        .map(|s| 0.5 * (1.0 + s / trajectories as f64))
        .collect())
}
