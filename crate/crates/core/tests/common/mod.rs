// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use ionbench_core::estimator::fit_survival_curve;
use ionbench_core::noise::{MotionalModel, NoiseConfig};
use ionbench_core::rb::{generate_plan, survival_probabilities, RbConfig, RunOptions, SimTier};
use ionbench_core::{CliffordGroup, PulseTiming};

pub fn ppc() -> f64 {
    CliffordGroup::shared().pulses_per_clifford()
}

/// Error per Clifford from a noiseless-readout RB simulation, fitted to the
/// mean survival at each length.
pub fn rb_epsilon(
    noise: &NoiseConfig,
    gate_time: f64,
    lengths: &[u64],
    seqs: u32,
    shots: u32,
) -> f64 {
    let mut cfg = RbConfig::new(gate_time);
    cfg.lengths = lengths.to_vec();
    cfg.seqs_per_length = seqs;
    cfg.shots_per_seq = shots;
    cfg.master_seed = 11;
    let plan = generate_plan(&cfg).unwrap();
    let s = survival_probabilities(&plan, noise, RunOptions::tier(SimTier::Fast)).unwrap();
    let points: Vec<(u64, f64)> = lengths
        .iter()
        .map(|&l| {
            let v: Vec<f64> = plan
                .sequences
                .iter()
                .zip(&s)
                .filter(|(q, _)| q.length == l)
                .map(|(_, p)| *p)
                .collect();
            (l, v.iter().sum::<f64>() / v.len() as f64)
        })
        .collect();
    fit_survival_curve(&points).unwrap().1
}

/// Simulated harmonic-motion error over the envelope formula at `n̄`. The
/// classical modulation carries the symmetric-ordered occupation `n̄ + ½`.
pub fn harmonic_ratio(nbar: f64, gate_time: f64) -> f64 {
    let model = MotionalModel {
        n_bar0: nbar + 0.5,
        heating_rate: 0.0,
        ..MotionalModel::default()
    };
    let noise = NoiseConfig {
        motional: Some(model),
        ..NoiseConfig::default()
    };
    let th = PulseTiming::from_gate_time(gate_time, ppc()).t_half_pi;
    let formula = ppc() * MotionalModel::default().envelope_error(nbar, th);
    rb_epsilon(&noise, gate_time, &[1, 1000, 3000], 8, 20) / formula
}

/// Gate time near 13 µs where the simulated harmonic error peaks: a coarse
/// sweep over one motional period refined by golden section.
pub fn harmonic_peak_gate_time() -> f64 {
    let period = ppc() * std::f64::consts::TAU / MotionalModel::default().omega_m;
    let (best, _) = (0..16)
        .map(|k| {
            let g = 13e-6 + period * k as f64 / 16.0;
            (g, harmonic_ratio(100.0, g))
        })
        .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    let (mut lo, mut hi) = (best - period / 16.0, best + period / 16.0);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..10 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if harmonic_ratio(100.0, a) > harmonic_ratio(100.0, b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}
