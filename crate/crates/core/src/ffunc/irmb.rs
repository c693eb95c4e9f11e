// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Filter-function prediction of interleaved randomised memory benchmarking.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordGroup;
use crate::error::{invalid, Result};
use crate::estimator::fit_survival_curve;
use crate::pulse::PulseTiming;
use crate::rb::{generate_plan, t2_from_irmb_slope, RbConfig};

use super::chi::{chi_for_kernel, Quadrature};
use super::filter::FilterKernel;
use super::psd::PhasePsd;
use super::timeline::ControlTimeline;

pub const MIN_RANDOM_SEQS: u32 = 10;

fn default_seqs() -> u32 {
    20
}

fn default_lengths() -> Vec<u64> {
    vec![1, 100, 1000, 3000, 10_000]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrmbPredictConfig {
    /// Mean Clifford duration without delays, in seconds.
    pub gate_time: f64,
    /// Delay inserted after every pulse, in seconds.
    pub delays: Vec<f64>,
    #[serde(default = "default_seqs")]
    pub n_random_seqs: u32,
    #[serde(default = "default_lengths")]
    pub lengths: Vec<u64>,
    #[serde(default)]
    pub seed: u64,
    /// Miscalibration of the bare qubit frequency, in Hz.
    #[serde(default)]
    pub static_detuning_hz: f64,
    /// Long random sequences make `G` oscillate faster than any practical
    /// grid resolves, so the default is a fixed log grid rather than
    /// adaptive refinement.
    #[serde(default = "default_quadrature")]
    pub quadrature: Quadrature,
}

fn default_quadrature() -> Quadrature {
    Quadrature::fixed(32)
}

impl IrmbPredictConfig {
    pub fn new(gate_time: f64, delays: Vec<f64>) -> Self {
        Self {
            gate_time,
            delays,
            n_random_seqs: default_seqs(),
            lengths: default_lengths(),
            seed: 0,
            static_detuning_hz: 0.0,
            quadrature: default_quadrature(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_random_seqs < MIN_RANDOM_SEQS {
            return Err(invalid(format!(
                "need at least {MIN_RANDOM_SEQS} random sequences, got {}",
                self.n_random_seqs
            )));
        }
        if self.delays.is_empty() || self.delays.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
            return Err(invalid(
                "delays must be a non-empty list of non-negative times",
            ));
        }
        if self.lengths.len() < 2 {
            return Err(invalid("prediction needs at least two lengths"));
        }
        if !self.static_detuning_hz.is_finite() {
            return Err(invalid("static detuning must be finite"));
        }
        self.quadrature.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrmbPoint {
    pub delay: f64,
    /// Predicted error per Clifford.
    pub error: f64,
    /// Jackknife standard error over the random sequences.
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrmbPrediction {
    pub points: Vec<IrmbPoint>,
    /// Least-squares slope of error against delay, per second.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Decoherence time implied by the slope.
    pub t2: Option<f64>,
    /// Some overlap integral had more than 1% of its mass in an edge decade.
    pub edge_warning: bool,
}

/// Predicts error per Clifford against delay from random Clifford sequences.
pub fn predict_irmb(psd: &PhasePsd, config: &IrmbPredictConfig) -> Result<IrmbPrediction> {
    config.validate()?;
    let ppc = CliffordGroup::shared().pulses_per_clifford();
    let timing = PulseTiming::from_gate_time(config.gate_time, ppc);
    timing.validate()?;
    let plan = generate_plan(&RbConfig {
        lengths: config.lengths.clone(),
        seqs_per_length: config.n_random_seqs,
        master_seed: config.seed,
        ..RbConfig::new(config.gate_time)
    })?;
    let n = config.n_random_seqs as usize;
    let detuning = std::f64::consts::TAU * config.static_detuning_hz;
    let mut points = Vec::with_capacity(config.delays.len());
    let mut edge_warning = false;
    for &delay in &config.delays {
        let survivals: Vec<(f64, bool)> = plan
            .sequences
            .par_iter()
            .map(|planned| -> Result<(f64, bool)> {
                let seq = &planned.sequence;
                let timeline =
                    ControlTimeline::from_pulses(seq.pulses(), &timing, delay, seq.prepared_state)?;
                let kernel = FilterKernel::new(&timeline);
                let chi = chi_for_kernel(psd, &kernel, &config.quadrature)?;
                let v = kernel.static_vector();
                let angle = detuning * v[0].hypot(v[1]);
                Ok((
                    0.5 * (1.0 + (-chi.chi).exp() * angle.cos()),
                    chi.edge_warning,
                ))
            })
            .collect::<Result<_>>()?;
        edge_warning |= survivals.iter().any(|s| s.1);
        // survivals are ordered length-major, n per length.
        let fit_without = |skip: Option<usize>| -> Result<f64> {
            let curve: Vec<(u64, f64)> = config
                .lengths
                .iter()
                .enumerate()
                .map(|(li, &l)| {
                    let block = &survivals[li * n..(li + 1) * n];
                    let (sum, count) = block
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| Some(*j) != skip)
                        .fold((0.0, 0usize), |(s, c), (_, p)| (s + p.0, c + 1));
                    (l, sum / count as f64)
                })
                .collect();
            Ok(fit_survival_curve(&curve)?.1)
        };
        let error = fit_without(None)?;
        let jack: Vec<f64> = (0..n)
            .map(|j| fit_without(Some(j)))
            .collect::<Result<_>>()?;
        let mean = jack.iter().sum::<f64>() / n as f64;
        let var = jack.iter().map(|e| (e - mean).powi(2)).sum::<f64>() * (n - 1) as f64 / n as f64;
        points.push(IrmbPoint {
            delay,
            error,
            stderr: var.sqrt(),
        });
    }
    let (slope, intercept) = linear_fit(&points);
    let t2 = slope.and_then(|s| t2_from_irmb_slope(s, ppc).ok());
    Ok(IrmbPrediction {
        points,
        slope,
        intercept,
        t2,
        edge_warning,
    })
}

fn linear_fit(points: &[IrmbPoint]) -> (Option<f64>, Option<f64>) {
    let m = points.len() as f64;
    if points.len() < 2 {
        return (None, None);
    }
    let mx = points.iter().map(|p| p.delay).sum::<f64>() / m;
    let my = points.iter().map(|p| p.error).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.delay - mx).powi(2)).sum();
    if sxx == 0.0 {
        return (None, None);
    }
    let sxy: f64 = points.iter().map(|p| (p.delay - mx) * (p.error - my)).sum();
    let slope = sxy / sxx;
    (Some(slope), Some(my - slope * mx))
}

/// Writes `delay_s,predicted_error,stderr` rows.
pub fn write_prediction_csv<W: Write>(prediction: &IrmbPrediction, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["delay_s", "predicted_error", "stderr"])?;
    for p in &prediction.points {
        w.write_record([
            p.delay.to_string(),
            p.error.to_string(),
            p.stderr.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
