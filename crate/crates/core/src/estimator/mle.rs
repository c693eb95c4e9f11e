// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Binomial maximum-likelihood fit of the survival decay.
//!
//! For fixed ε the log-likelihood is concave in A, so A is profiled out
//! exactly. The profile in ε is searched on a logarithmic grid and refined by
//! golden-section search.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::optim::{golden_max, newton_bracketed};
use crate::rb::{PooledCounts, RbDataset};

use super::model::{decay, xlny};

pub const A_MAX: f64 = 0.5;
pub const EPS_MAX: f64 = 0.5;
const GRID_POINTS: usize = 241;
const EPS_GRID_MIN: f64 = 1e-13;
/// Below this the fitted error is reported as exactly zero.
const EPS_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitFlags {
    /// The best fit sits on the ε = 0 boundary.
    pub boundary: bool,
    /// The decay amplitude is too small for ε to be meaningful.
    pub unidentifiable: bool,
    /// The optimiser met its tolerance.
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub epsilon: f64,
    pub amplitude_a: f64,
    pub epsilon_stderr: Option<f64>,
    pub a_stderr: Option<f64>,
    /// 2.5% and 97.5% bootstrap percentiles of ε.
    pub epsilon_interval: Option<(f64, f64)>,
    /// Binomial log-likelihood without the combinatorial constant.
    pub log_likelihood: f64,
    pub n_bootstrap: usize,
    pub flags: FitFlags,
}

/// Log-likelihood of pooled counts at `(A, ε)`.
pub fn log_likelihood(data: &[PooledCounts], amplitude: f64, epsilon: f64) -> f64 {
    data.iter()
        .map(|d| {
            let p = (amplitude * decay(d.length, epsilon) + 0.5).clamp(0.0, 1.0);
            xlny(d.errors as f64, 1.0 - p) + xlny((d.shots - d.errors) as f64, p)
        })
        .sum()
}

/// Best A for fixed ε and its log-likelihood.
pub(crate) fn profile_amplitude(data: &[PooledCounts], epsilon: f64) -> (f64, f64) {
    let r: Vec<f64> = data.iter().map(|d| decay(d.length, epsilon)).collect();
    let grad = |a: f64| -> f64 {
        data.iter()
            .zip(&r)
            .map(|(d, &r)| {
                let p = 0.5 + a * r;
                let e = d.errors as f64;
                let s = (d.shots - d.errors) as f64;
                let mut g = 0.0;
                if s > 0.0 {
                    g += s * r / p;
                }
                if e > 0.0 {
                    g -= e * r / (1.0 - p);
                }
                g
            })
            .sum()
    };
    let hess = |a: f64| -> f64 {
        -data
            .iter()
            .zip(&r)
            .map(|(d, &r)| {
                let p = 0.5 + a * r;
                let e = d.errors as f64;
                let s = (d.shots - d.errors) as f64;
                r * r
                    * (s / (p * p)
                        + if e > 0.0 {
                            e / ((1.0 - p) * (1.0 - p))
                        } else {
                            0.0
                        })
            })
            .sum::<f64>()
    };
    let a = if grad(0.0) <= 0.0 {
        0.0
    } else if grad(A_MAX) >= 0.0 {
        A_MAX
    } else {
        newton_bracketed(grad, hess, 0.0, A_MAX, 1e-15).unwrap_or(0.0)
    };
    (a, log_likelihood(data, a, epsilon))
}

fn check_input(data: &[PooledCounts]) -> Result<()> {
    let informative = data.iter().filter(|d| d.shots > 0).count();
    if informative < 2 {
        return Err(invalid(
            "fit needs at least two distinct lengths with shots",
        ));
    }
    if data.iter().any(|d| d.errors > d.shots) {
        return Err(invalid("errors exceed shots"));
    }
    Ok(())
}

/// Maximum-likelihood fit on pooled per-length counts.
pub fn mle_fit_pooled(data: &[PooledCounts]) -> Result<DecayFit> {
    check_input(data)?;
    let data: Vec<PooledCounts> = data.iter().copied().filter(|d| d.shots > 0).collect();
    let profile = |eps: f64| profile_amplitude(&data, eps).1;

    let grid: Vec<f64> = std::iter::once(0.0)
        .chain((0..GRID_POINTS).map(|i| {
            let f = i as f64 / (GRID_POINTS - 1) as f64;
            (EPS_GRID_MIN.ln() + f * ((EPS_MAX * 0.999_999).ln() - EPS_GRID_MIN.ln())).exp()
        }))
        .collect();
    let values: Vec<f64> = grid.iter().map(|&e| profile(e)).collect();
    let best = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::NonConvergence {
            what: "mle_fit",
            detail: "likelihood is not finite anywhere".into(),
        })?;

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (mut eps, mut ll) = if best <= 1 {
        golden_max(profile, 0.0, hi, 1e-15, 400)
    } else {
        let (x, v) = golden_max(|x| profile(x.exp()), lo.ln(), hi.ln(), 1e-12, 400);
        (x.exp(), v)
    };
    let converged = ll.is_finite();
    if values[best] > ll {
        eps = grid[best];
        ll = values[best];
    }
    let boundary = eps < EPS_FLOOR;
    if boundary {
        eps = 0.0;
        ll = profile(0.0);
    }
    let (a, ll_final) = profile_amplitude(&data, eps);
    let min_len = data.iter().map(|d| d.length).min().unwrap_or(0);
    let unidentifiable = a < 0.01 || a * decay(min_len, eps) < 0.01;
    Ok(DecayFit {
        epsilon: eps,
        amplitude_a: a,
        epsilon_stderr: None,
        a_stderr: None,
        epsilon_interval: None,
        log_likelihood: ll_final.max(ll),
        n_bootstrap: 0,
        flags: FitFlags {
            boundary,
            unidentifiable,
            converged,
        },
    })
}

/// Maximum-likelihood fit of a dataset, pooling sequences of equal length.
pub fn mle_fit(dataset: &RbDataset) -> Result<DecayFit> {
    dataset.validate()?;
    mle_fit_pooled(&dataset.pooled())
}
