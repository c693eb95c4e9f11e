// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Qubit plus four off-resonant spectator levels.
//!
//! Each qubit level couples through σ transitions to two spectators, one
//! detuned by `+Δ_S` and one by `−Δ_S`, with Rabi frequency
//! `rabi_ratio · Ω(t)`. Level order is `|0⟩, |1⟩, s0+, s0−, s1+, s1−`.

use std::f64::consts::{PI, TAU};

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordGroup, GROUP_ORDER};
use crate::error::{invalid, Error, Result};
use crate::pulse::{PulseLabel, PulseSpec, PulseTiming};

use super::drive::{AmplitudeTrace, DriveParams};
use super::evolve::{pulse_segments, Segment};

pub type State6 = SVector<C64, 6>;
type Mat6 = SMatrix<C64, 6, 6>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectatorConfig {
    /// Mean spectator detuning Δ_S in rad/s.
    pub detuning_s: f64,
    /// Spectator Rabi frequency relative to the qubit Rabi frequency.
    pub rabi_ratio: f64,
    /// Coherence time of the spectator transitions.
    pub t2_s: f64,
}

impl Default for SpectatorConfig {
    fn default() -> Self {
        Self {
            detuning_s: TAU * 104e6,
            rabi_ratio: 1.4,
            t2_s: 40e-3,
        }
    }
}

impl SpectatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.detuning_s == 0.0 || !self.detuning_s.is_finite() {
            return Err(invalid("spectator detuning must be non-zero"));
        }
        if self.rabi_ratio < 0.0 || !(self.t2_s > 0.0) {
            return Err(invalid(
                "spectator coupling must be non-negative and T2 positive",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectatorOutcome {
    pub state: State6,
    /// Population outside the qubit subspace after the pulse.
    pub leakage: f64,
    /// Time integral of the spectator population during the pulse.
    pub dressed_time: f64,
    /// Extra dephasing error from the dressed population, `∫P_S dt / T2_S`.
    pub dephasing_error: f64,
}

/// Embeds a qubit state into the six-level space.
pub fn embed(a0: C64, a1: C64) -> State6 {
    let mut s = State6::zeros();
    s[0] = a0;
    s[1] = a1;
    s
}

fn spectator_population(s: &State6) -> f64 {
    (2..6).map(|i| s[i].norm_sqr()).sum()
}

fn hamiltonian(seg: &Segment, cfg: &SpectatorConfig) -> Mat6 {
    let mut h = Mat6::zeros();
    let half = 0.5 * seg.delta;
    let eq = [half, -half];
    let drive = C64::from_polar(0.5 * seg.rabi, -seg.phase);
    h[(0, 0)] = C64::new(eq[0], 0.0);
    h[(1, 1)] = C64::new(eq[1], 0.0);
    h[(0, 1)] = drive;
    h[(1, 0)] = drive.conj();
    let spec = C64::from_polar(0.5 * cfg.rabi_ratio * seg.rabi, -seg.phase);
    for q in 0..2 {
        for (j, sign) in [1.0, -1.0].into_iter().enumerate() {
            let s = 2 + 2 * q + j;
            h[(s, s)] = C64::new(eq[q] + sign * cfg.detuning_s, 0.0);
            h[(q, s)] = spec;
            h[(s, q)] = spec.conj();
        }
    }
    h
}

fn propagator(h: &Mat6, dt: f64) -> Mat6 {
    (h * C64::new(0.0, -dt)).exp()
}

/// Propagator of one pulse and its gap, plus `∫P_S dt` for the given input.
fn pulse_evolution(
    state: &State6,
    pulse: &PulseSpec,
    drive: &DriveParams,
    cfg: &SpectatorConfig,
) -> (State6, f64) {
    let mut segments = Vec::new();
    pulse_segments(
        pulse,
        drive,
        &AmplitudeTrace::unity(),
        0.0,
        0.0,
        &mut segments,
    );
    let resolve = PI / (4.0 * cfg.detuning_s.abs());
    let mut psi = *state;
    let mut dressed = 0.0;
    for seg in &segments {
        let n = (seg.dt / resolve).ceil().max(1.0) as usize;
        let h = seg.dt / n as f64;
        let u = propagator(&hamiltonian(&Segment { dt: h, ..*seg }, cfg), h);
        for _ in 0..n {
            let before = spectator_population(&psi);
            psi = u * psi;
            dressed += 0.5 * h * (before + spectator_population(&psi));
        }
    }
    if pulse.gap_time > 0.0 {
        let gap = Segment {
            rabi: 0.0,
            phase: 0.0,
            delta: drive.detuning,
            dt: pulse.gap_time,
        };
        psi = propagator(&hamiltonian(&gap, cfg), gap.dt) * psi;
    }
    (psi, dressed)
}

/// Evolves a six-level state through one pulse and its gap.
pub fn simulate_spectator(
    state: &State6,
    pulse: &PulseSpec,
    drive: &DriveParams,
    cfg: &SpectatorConfig,
) -> Result<SpectatorOutcome> {
    cfg.validate()?;
    pulse.validate()?;
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm });
    }
    let (psi, dressed) = pulse_evolution(state, pulse, drive, cfg);
    Ok(SpectatorOutcome {
        state: psi,
        leakage: spectator_population(&psi),
        dressed_time: dressed,
        dephasing_error: dressed / cfg.t2_s,
    })
}

/// Per-Clifford error from spectator levels, estimated from random
/// benchmarking sequences of `n_cliffords` gates.
///
/// The error combines the final loss of survival (leakage and any coherent
/// residue) with the dressed-population dephasing accrued by every pulse.
pub fn spectator_sequence_error(
    timing: &PulseTiming,
    cfg: &SpectatorConfig,
    n_cliffords: usize,
    n_sequences: usize,
    seed: u64,
) -> Result<f64> {
    cfg.validate()?;
    timing.validate()?;
    if n_cliffords == 0 || n_sequences == 0 {
        return Err(invalid("need at least one Clifford and one sequence"));
    }
    let group = CliffordGroup::shared();
    let probe = PulseSpec::new(PulseLabel::PlusX, timing);
    let drive = DriveParams::for_pulse(&probe);

    // One propagator per generator; columns give the action on every basis state.
    let mut gens = Vec::with_capacity(4);
    let mut dressed_per_pulse = 0.0;
    for label in PulseLabel::ALL {
        let spec = PulseSpec::new(label, timing);
        let mut u = Mat6::zeros();
        for col in 0..6 {
            let mut e = State6::zeros();
            e[col] = C64::new(1.0, 0.0);
            let (out, dressed) = pulse_evolution(&e, &spec, &drive, cfg);
            u.set_column(col, &out);
            if col < 2 {
                dressed_per_pulse += dressed / 8.0;
            }
        }
        gens.push(u);
    }
    let clifford_ops: Vec<Mat6> = (0..GROUP_ORDER as u8)
        .map(|c| {
            group
                .decompose(c)
                .iter()
                .fold(Mat6::identity(), |acc, &l| gens[l as usize] * acc)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut loss = 0.0;
    for _ in 0..n_sequences {
        let gates: Vec<u8> = (0..n_cliffords)
            .map(|_| rng.random_range(0..GROUP_ORDER as u8))
            .collect();
        let recovery = group.recovery_gate(&gates)?.index;
        let prepared = rng.random_range(0..2usize);
        let mut psi = State6::zeros();
        psi[prepared] = C64::new(1.0, 0.0);
        for &g in gates.iter().chain(std::iter::once(&recovery)) {
            psi = clifford_ops[g as usize] * psi;
        }
        loss += 1.0 - psi[prepared].norm_sqr();
    }
    let per_gate_loss = loss / (n_sequences * (n_cliffords + 1)) as f64;
    let per_gate_dephasing = group.pulses_per_clifford() * dressed_per_pulse / cfg.t2_s;
    Ok(per_gate_loss + per_gate_dephasing)
}
