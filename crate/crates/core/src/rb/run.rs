// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Execution of benchmarking plans.
//!
//! The full tier evolves the state vector through every pulse with its ramps.
//! The fast tier propagates the Bloch vector through one rotation per pulse.
//! Pulses whose noise is constant over a shot reuse the exact ramped
//! propagator; time-varying amplitudes are folded into an equivalent
//! rectangular pulse. Dephasing enters the fast tier as its ensemble average.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordGroup, ShelveChoice};
use crate::error::{invalid, Result};
use crate::linalg::{QubitState, So3, UnitaryOp};
use crate::noise::rng::{purpose, StreamKey};
use crate::noise::{
    motional_modulation, readout_error_probability, sample_shot_amplitude, IdleRates, NoiseConfig,
    ShelveSet,
};
use crate::pulse::{PulseLabel, PulseSpec, PulseTiming};
use crate::sim::{
    free_evolution, pulse_propagator, AmplitudeTrace, DriveParams, PulseNoise, RampShape,
};

use super::dataset::{RbDataset, RbMetadata, SequenceCounts};
use super::plan::{PlannedSequence, RbMode, RbPlan};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimTier {
    #[default]
    Fast,
    Full,
}

/// Settings of a run that are not part of the noise model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunOptions {
    #[serde(default)]
    pub tier: SimTier,
    #[serde(default)]
    pub ramp_shape: RampShape,
    /// In IRMB mode, advance later pulse phases by the ac Zeeman phase that
    /// the undriven delays fail to accumulate.
    #[serde(default = "yes")]
    pub phase_compensation: bool,
}

fn yes() -> bool {
    true
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tier: SimTier::Fast,
            ramp_shape: RampShape::SinSquared,
            phase_compensation: true,
        }
    }
}

impl RunOptions {
    pub fn tier(tier: SimTier) -> Self {
        Self {
            tier,
            ..Self::default()
        }
    }
}

/// Everything a shot needs that is fixed for the whole run.
struct Context<'a> {
    timing: PulseTiming,
    drive: DriveParams,
    noise: &'a NoiseConfig,
    mode: RbMode,
    delay: f64,
    options: RunOptions,
    key: StreamKey,
}

impl Context<'_> {
    fn compensation_rate(&self) -> f64 {
        if self.mode == RbMode::Irmb && self.options.phase_compensation {
            self.noise.zeeman()
        } else {
            0.0
        }
    }

    /// Wall-clock time from the first pulse to readout.
    fn duration(&self, pulses: usize) -> f64 {
        pulses as f64 * (self.timing.slot() + self.delay)
    }

    fn dephasing_factor(&self) -> f64 {
        self.noise
            .t2
            .map_or(1.0, |t2| (-(self.timing.slot() + self.delay) / t2).exp())
    }

    /// True when every shot of a sequence has the same error probability.
    fn shot_independent(&self) -> bool {
        match self.options.tier {
            SimTier::Fast => {
                self.noise.amplitude.is_deterministic() && self.noise.motional.is_none()
            }
            SimTier::Full => self.noise.is_shot_independent(),
        }
    }

    fn shot_trace(&self, rng: &mut ChaCha8Rng) -> AmplitudeTrace {
        AmplitudeTrace::polynomial(sample_shot_amplitude(&self.noise.amplitude, rng))
    }

    /// Error probability of one shot given the probability `q` of finding the
    /// expected state after the gates.
    fn shot_error(&self, seq: &PlannedSequence, q: f64) -> Result<f64> {
        let s = &seq.sequence;
        let n_gates = s.gate_count() as i32;
        let q = 0.5 + (q - 0.5) * (1.0 - 2.0 * self.noise.depolarizing).powi(n_gates);
        let shelve = match s.shelve_choice {
            ShelveChoice::Expected => ShelveSet::Reference,
            ShelveChoice::Other => ShelveSet::Other,
        };
        let p = readout_error_probability(
            &self.noise.idle,
            self.duration(s.pulse_count()),
            s.expected_state(),
            q,
            shelve,
        )?;
        let spam = self.noise.spam;
        Ok((p * (1.0 - spam) + (1.0 - p) * spam).clamp(0.0, 1.0))
    }

    /// Probability of the expected state after the gates of one shot.
    fn shot_survival(
        &self,
        seq: &PlannedSequence,
        shot_rng: Option<&mut ChaCha8Rng>,
        dephasing_rng: Option<&mut ChaCha8Rng>,
    ) -> Result<f64> {
        if self.mode == RbMode::Idle {
            return Ok(1.0);
        }
        match self.options.tier {
            SimTier::Fast => self.fast_survival(seq, shot_rng),
            SimTier::Full => self.full_survival(seq, shot_rng, dephasing_rng),
        }
    }

    fn full_survival(
        &self,
        seq: &PlannedSequence,
        shot_rng: Option<&mut ChaCha8Rng>,
        dephasing_rng: Option<&mut ChaCha8Rng>,
    ) -> Result<f64> {
        let s = &seq.sequence;
        let mut noise_rng = shot_rng;
        let base = match noise_rng.as_deref_mut() {
            Some(rng) => self.shot_trace(rng),
            None => AmplitudeTrace::polynomial(self.noise.amplitude.mu.clone()),
        };
        let kick = match self.noise.t2 {
            Some(t2) => Some(
                Normal::new(0.0, (2.0 * (self.timing.slot() + self.delay) / t2).sqrt())
                    .map_err(|e| invalid(e.to_string()))?,
            ),
            None => None,
        };
        let mut dephasing_rng = dephasing_rng;
        let comp = self.compensation_rate() * self.delay;
        let mut psi = QubitState::basis(s.prepared_state);
        let mut t = 0.0;
        for (i, label) in s.pulses().enumerate() {
            let spec = PulseSpec::new(label, &self.timing);
            let mut trace = base.clone();
            if let (Some(m), Some(rng)) = (&self.noise.motional, noise_rng.as_deref_mut()) {
                trace.harmonic = motional_modulation(m, t, rng).harmonic;
            }
            let z_kick = match (&kick, dephasing_rng.as_deref_mut()) {
                (Some(k), Some(rng)) => k.sample(rng),
                _ => 0.0,
            };
            let noise = PulseNoise {
                trace,
                detuning: 0.0,
                phase: comp * i as f64,
                post_delay: self.delay,
                z_kick,
            };
            psi = pulse_propagator(&spec, &self.drive, &noise, t)?.apply(&psi);
            t += self.timing.slot() + self.delay;
        }
        Ok(psi.probability(s.expected_state()))
    }

    /// Frame correction applied after every pulse when later pulse phases are
    /// advanced. Working in the frame that co-rotates with the accumulated
    /// compensation phase keeps each pulse's propagator fixed.
    fn frame_step(&self) -> So3 {
        let comp = self.compensation_rate() * self.delay;
        if comp == 0.0 {
            So3::IDENTITY
        } else {
            UnitaryOp::z_rotation(-comp).to_so3()
        }
    }

    /// Exact Bloch rotation of each pulse label for a shot-constant trace.
    fn static_rotations(&self, trace: &AmplitudeTrace) -> Result<[So3; 4]> {
        let frame = self.frame_step();
        let mut out = [So3::IDENTITY; 4];
        for (slot, label) in out.iter_mut().zip(PulseLabel::ALL) {
            let spec = PulseSpec::new(label, &self.timing);
            let noise = PulseNoise {
                trace: trace.clone(),
                post_delay: self.delay,
                ..PulseNoise::default()
            };
            *slot = frame * pulse_propagator(&spec, &self.drive, &noise, 0.0)?.to_so3();
        }
        Ok(out)
    }

    /// Rectangular-pulse rotation for a time-varying trace starting at `t0`.
    fn equivalent_rotation(&self, label: PulseLabel, trace: &AmplitudeTrace, t0: f64) -> So3 {
        let tm = &self.timing;
        let r = tm.ramp_time;
        let width = tm.t_half_pi - r;
        let m = trace.mean(t0 + 0.5 * r, t0 + tm.t_half_pi - 0.5 * r);
        let phase = label.axis_phase() + self.drive.phase;
        let delta = self.drive.detuning;
        let free_after = 0.5 * r + tm.gap_time + self.delay;
        let u = if delta == 0.0 && self.drive.zeeman.shift_at_full_amp == 0.0 {
            UnitaryOp::rotation(FRAC_PI_2 * m, phase)
        } else {
            let during = delta - self.drive.zeeman.shift(m);
            free_evolution(delta, free_after)
                * UnitaryOp::from_segment(self.drive.omega_q * m, phase, during, width)
                * free_evolution(delta, 0.5 * r)
        };
        self.frame_step() * u.to_so3()
    }

    fn fast_survival(
        &self,
        seq: &PlannedSequence,
        shot_rng: Option<&mut ChaCha8Rng>,
    ) -> Result<f64> {
        let s = &seq.sequence;
        let mut rng = shot_rng;
        let trace = match rng.as_deref_mut() {
            Some(r) => self.shot_trace(r),
            None => AmplitudeTrace::polynomial(self.noise.amplitude.mu.clone()),
        };
        let lambda = self.dephasing_factor();
        let sign = if s.prepared_state == 0 { 1.0 } else { -1.0 };
        let mut v = [0.0, 0.0, sign];
        let varying = !trace.is_static() || self.noise.motional.is_some();
        let cached = if varying {
            None
        } else {
            Some(self.static_rotations(&trace)?)
        };
        let mut t = 0.0;
        for label in s.pulses() {
            let rot = match &cached {
                Some(c) => c[label_index(label)],
                None => {
                    let mut tr = trace.clone();
                    if let (Some(m), Some(r)) = (&self.noise.motional, rng.as_deref_mut()) {
                        tr.harmonic = motional_modulation(m, t, r).harmonic;
                    }
                    self.equivalent_rotation(label, &tr, t)
                }
            };
            v = rot.apply(v);
            if lambda != 1.0 {
                v[0] *= lambda;
                v[1] *= lambda;
            }
            t += self.timing.slot() + self.delay;
        }
        let expected = if s.expected_state() == 0 { 1.0 } else { -1.0 };
        Ok(0.5 * (1.0 + expected * v[2]))
    }

    fn run_sequence(&self, seq: &PlannedSequence, shots: u32) -> Result<SequenceCounts> {
        let seq_key = self.key.sequence(seq.seq_id);
        let errors = if self.shot_independent() {
            let p_err = self.shot_error(seq, self.shot_survival(seq, None, None)?)?;
            let mut rng = seq_key.rng(purpose::OUTCOME);
            sample_binomial(shots as u64, p_err, &mut rng)
        } else {
            let mut errors = 0;
            for shot in 0..shots as u64 {
                let shot_key = seq_key.shot(shot);
                let mut noise_rng = shot_key.rng(purpose::AMPLITUDE);
                let mut dephasing_rng = shot_key.rng(purpose::DEPHASING);
                let q = self.shot_survival(seq, Some(&mut noise_rng), Some(&mut dephasing_rng))?;
                let p_err = self.shot_error(seq, q)?;
                if shot_key.rng(purpose::OUTCOME).random_bool(p_err) {
                    errors += 1;
                }
            }
            errors
        };
        Ok(SequenceCounts {
            length: seq.length,
            seq_id: seq.seq_id,
            errors,
            shots: shots as u64,
        })
    }
}

/// Mean error-free probability of each planned sequence, readout effects
/// included. Shot-dependent noise is averaged over `shots_per_seq` draws.
pub fn survival_probabilities(
    plan: &RbPlan,
    noise: &NoiseConfig,
    options: RunOptions,
) -> Result<Vec<f64>> {
    let ctx = context(plan, noise, options, plan.config.mode)?;
    let shots = plan.config.shots_per_seq as u64;
    plan.sequences
        .par_iter()
        .map(|seq| {
            if ctx.shot_independent() {
                return Ok(1.0 - ctx.shot_error(seq, ctx.shot_survival(seq, None, None)?)?);
            }
            let key = ctx.key.sequence(seq.seq_id);
            let mut total = 0.0;
            for shot in 0..shots {
                let k = key.shot(shot);
                let q = ctx.shot_survival(
                    seq,
                    Some(&mut k.rng(purpose::AMPLITUDE)),
                    Some(&mut k.rng(purpose::DEPHASING)),
                )?;
                total += 1.0 - ctx.shot_error(seq, q)?;
            }
            Ok(total / shots as f64)
        })
        .collect()
}

fn label_index(label: PulseLabel) -> usize {
    PulseLabel::ALL
        .iter()
        .position(|&l| l == label)
        .unwrap_or(0)
}

fn sample_binomial(n: u64, p: f64, rng: &mut ChaCha8Rng) -> u64 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).map(|b| b.sample(rng)).unwrap_or(0)
    }
}

fn context<'a>(
    plan: &RbPlan,
    noise: &'a NoiseConfig,
    options: RunOptions,
    mode: RbMode,
) -> Result<Context<'a>> {
    plan.config.validate()?;
    noise.validate()?;
    if plan.config.mode != mode {
        return Err(invalid(format!(
            "plan mode {:?} does not match requested {:?}",
            plan.config.mode, mode
        )));
    }
    let ppc = CliffordGroup::shared().pulses_per_clifford();
    let timing = PulseTiming::from_gate_time(plan.config.gate_time, ppc);
    timing.validate()?;
    let probe = PulseSpec::new(PulseLabel::PlusX, &timing);
    let drive = DriveParams::for_pulse(&probe)
        .with_detuning(noise.detuning())
        .with_zeeman(noise.zeeman())
        .with_ramp_shape(options.ramp_shape);
    let ctx = Context {
        timing,
        drive,
        noise,
        mode,
        delay: if mode == RbMode::Irmb {
            plan.config.irmb_delay
        } else {
            0.0
        },
        options,
        key: StreamKey::new(plan.config.master_seed),
    };
    Ok(ctx)
}

fn execute(
    plan: &RbPlan,
    noise: &NoiseConfig,
    options: RunOptions,
    mode: RbMode,
) -> Result<RbDataset> {
    let ctx = context(plan, noise, options, mode)?;
    let shots = plan.config.shots_per_seq;
    let records = plan
        .sequences
        .par_iter()
        .map(|seq| ctx.run_sequence(seq, shots))
        .collect::<Result<Vec<_>>>()?;
    RbDataset::new(
        RbMetadata {
            mode,
            gate_time: plan.config.gate_time,
            seed: plan.config.master_seed,
            irmb_delay: ctx.delay,
        },
        records,
    )
}

/// Gate benchmarking with every configured noise channel.
pub fn run_rb(plan: &RbPlan, noise: &NoiseConfig, tier: SimTier) -> Result<RbDataset> {
    run_rb_with(plan, noise, RunOptions::tier(tier))
}

pub fn run_rb_with(plan: &RbPlan, noise: &NoiseConfig, options: RunOptions) -> Result<RbDataset> {
    execute(plan, noise, options, RbMode::Gate)
}

/// Benchmarking with every pulse replaced by a delay. Only the idle channel
/// and the readout flip act.
pub fn run_idle_rb(plan: &RbPlan, idle: &IdleRates) -> Result<RbDataset> {
    let noise = NoiseConfig {
        idle: *idle,
        ..NoiseConfig::default()
    };
    execute(plan, &noise, RunOptions::default(), RbMode::Idle)
}

/// Idle benchmarking with readout flips.
pub fn run_idle_rb_with(plan: &RbPlan, idle: &IdleRates, spam: f64) -> Result<RbDataset> {
    let noise = NoiseConfig {
        idle: *idle,
        spam,
        ..NoiseConfig::default()
    };
    execute(plan, &noise, RunOptions::default(), RbMode::Idle)
}

/// Benchmarking with `plan.config.irmb_delay` of free evolution after every pulse.
pub fn run_irmb(plan: &RbPlan, noise: &NoiseConfig, options: RunOptions) -> Result<RbDataset> {
    execute(plan, noise, options, RbMode::Irmb)
}

/// Error per Clifford expected from white dephasing with coherence time `t2`
/// when each pulse slot lasts `slot` seconds.
pub fn irmb_error_per_clifford(pulses_per_clifford: f64, slot: f64, t2: f64) -> f64 {
    pulses_per_clifford / 3.0 * slot / t2
}

/// Decoherence time from the slope of error per Clifford against delay.
pub fn t2_from_irmb_slope(slope: f64, pulses_per_clifford: f64) -> Result<f64> {
    if !(slope > 0.0) {
        return Err(invalid("IRMB slope must be positive"));
    }
    Ok(pulses_per_clifford / (3.0 * slope))
}
