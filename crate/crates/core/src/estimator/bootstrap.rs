// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::noise::rng::{purpose, StreamKey};
use crate::rb::{PooledCounts, RbDataset};

use super::mle::{mle_fit_pooled, DecayFit};
use super::model::survival_model;

pub const DEFAULT_RESAMPLES: usize = 1000;
const MAX_FAILED_FRACTION: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub epsilon_stderr: f64,
    pub a_stderr: f64,
    pub epsilon_interval: (f64, f64),
    pub a_interval: (f64, f64),
    pub resamples: usize,
    pub failed: usize,
}

fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt()
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (pos - i as f64) * (sorted[j] - sorted[i])
}

/// Parametric bootstrap on pooled counts: synthetic datasets are drawn from
/// the fitted model with the same shots per length and refitted.
pub fn bootstrap_pooled(
    data: &[PooledCounts],
    fit: &DecayFit,
    n_resamples: usize,
    seed: u64,
) -> Result<BootstrapSummary> {
    if n_resamples < 2 {
        return Err(invalid("bootstrap needs at least two resamples"));
    }
    let key = StreamKey::new(seed);
    let refits: Vec<Option<(f64, f64)>> = (0..n_resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = key.shot(b).rng(purpose::BOOTSTRAP);
            let synthetic: Vec<PooledCounts> = data
                .iter()
                .map(|d| {
                    let p_err = 1.0 - survival_model(d.length, fit.amplitude_a, fit.epsilon);
                    let errors = if d.shots == 0 || p_err <= 0.0 {
                        0
                    } else if p_err >= 1.0 {
                        d.shots
                    } else {
                        Binomial::new(d.shots, p_err)
                            .map(|b| b.sample(&mut rng))
                            .unwrap_or(0)
                    };
                    PooledCounts { errors, ..*d }
                })
                .collect();
            match mle_fit_pooled(&synthetic) {
                Ok(f) if f.flags.converged => Some((f.epsilon, f.amplitude_a)),
                _ => None,
            }
        })
        .collect();
    let ok: Vec<(f64, f64)> = refits.iter().flatten().copied().collect();
    let failed = n_resamples - ok.len();
    if failed as f64 > MAX_FAILED_FRACTION * n_resamples as f64 {
        return Err(Error::Bootstrap {
            failed,
            total: n_resamples,
        });
    }
    let mut eps: Vec<f64> = ok.iter().map(|x| x.0).collect();
    let mut amp: Vec<f64> = ok.iter().map(|x| x.1).collect();
    let (es, as_) = (std_dev(&eps), std_dev(&amp));
    eps.sort_by(f64::total_cmp);
    amp.sort_by(f64::total_cmp);
    Ok(BootstrapSummary {
        epsilon_stderr: es,
        a_stderr: as_,
        epsilon_interval: (percentile(&eps, 0.025), percentile(&eps, 0.975)),
        a_interval: (percentile(&amp, 0.025), percentile(&amp, 0.975)),
        resamples: n_resamples,
        failed,
    })
}

/// Bootstrap uncertainties for a dataset fit.
pub fn bootstrap_ci(
    dataset: &RbDataset,
    fit: &DecayFit,
    n_resamples: usize,
    seed: u64,
) -> Result<BootstrapSummary> {
    bootstrap_pooled(&dataset.pooled(), fit, n_resamples, seed)
}

/// Fits and attaches bootstrap uncertainties in one step.
pub fn fit_with_bootstrap(
    data: &[PooledCounts],
    n_resamples: usize,
    seed: u64,
) -> Result<DecayFit> {
    let mut fit = mle_fit_pooled(data)?;
    let summary = bootstrap_pooled(data, &fit, n_resamples, seed)?;
    fit.epsilon_stderr = Some(summary.epsilon_stderr);
    fit.a_stderr = Some(summary.a_stderr);
    fit.epsilon_interval = Some(summary.epsilon_interval);
    fit.n_bootstrap = n_resamples;
    Ok(fit)
}
