// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Piecewise-exact propagation through shaped pulses and free evolution.

use crate::clifford::GateSequence;
use crate::error::Result;
use crate::linalg::{QubitState, UnitaryOp};
use crate::pulse::{PulseSpec, PulseTiming};

use super::drive::{AmplitudeTrace, DriveParams};

/// Constant-Hamiltonian piece of a drive waveform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub rabi: f64,
    pub phase: f64,
    pub delta: f64,
    pub dt: f64,
}

impl Segment {
    pub fn propagator(&self) -> UnitaryOp {
        UnitaryOp::from_segment(self.rabi, self.phase, self.delta, self.dt)
    }
}

/// Per-pulse perturbations supplied by a noise model.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseNoise {
    pub trace: AmplitudeTrace,
    /// Extra detuning in rad/s, held for the pulse and its gap.
    pub detuning: f64,
    /// Extra phase added to the pulse axis.
    pub phase: f64,
    /// Free evolution appended after the gap.
    pub post_delay: f64,
    /// Z rotation applied after everything else.
    pub z_kick: f64,
}

/// Source of per-pulse noise during a sequence.
pub trait PulseHook {
    /// Called once per pulse with its index in the sequence and its start time.
    fn pulse(&mut self, index: usize, t_start: f64) -> PulseNoise;
}

/// Noise-free hook.
#[derive(Clone, Copy, Debug, Default)]
pub struct Noiseless;

impl PulseHook for Noiseless {
    fn pulse(&mut self, _index: usize, _t_start: f64) -> PulseNoise {
        PulseNoise::default()
    }
}

impl<F: FnMut(usize, f64) -> PulseNoise> PulseHook for F {
    fn pulse(&mut self, index: usize, t_start: f64) -> PulseNoise {
        self(index, t_start)
    }
}

/// Appends the drive segments of one pulse (ramps and flat top, no gap) to `out`.
///
/// `t0` is the pulse start time within the shot, used to evaluate `trace`.
pub fn pulse_segments(
    spec: &PulseSpec,
    drive: &DriveParams,
    trace: &AmplitudeTrace,
    t0: f64,
    extra_detuning: f64,
    out: &mut Vec<Segment>,
) {
    let peak = drive.omega_q * spec.amp_scale;
    let phase = spec.axis_phase() + drive.phase;
    let base_delta = drive.detuning + extra_detuning;
    let mut push = |start: f64, dt: f64, envelope: f64| {
        let rabi = peak * envelope * trace.mean(t0 + start, t0 + start + dt);
        let delta = base_delta - drive.zeeman.shift(rabi / drive.omega_q);
        out.push(Segment {
            rabi,
            phase,
            delta,
            dt,
        });
    };

    let ramp = spec.ramp_time;
    if ramp > 0.0 {
        let n = drive.ramp_steps;
        let h = ramp / n as f64;
        for k in 0..n {
            let u = (k as f64 + 0.5) / n as f64;
            push(k as f64 * h, h, drive.ramp_shape.envelope(u));
        }
    }
    let flat = spec.flat_time();
    let n_flat = trace.substeps(flat);
    let h = flat / n_flat as f64;
    for k in 0..n_flat {
        push(ramp + k as f64 * h, h, 1.0);
    }
    if ramp > 0.0 {
        let n = drive.ramp_steps;
        let h = ramp / n as f64;
        let start = ramp + flat;
        for k in 0..n {
            let u = 1.0 - (k as f64 + 0.5) / n as f64;
            push(start + k as f64 * h, h, drive.ramp_shape.envelope(u));
        }
    }
}

/// Product of segment propagators in time order. Segments sharing one
/// rotation axis with no detuning are merged into a single exact rotation.
pub fn segments_propagator(segments: &[Segment]) -> UnitaryOp {
    if let Some(first) = segments.first() {
        let single_axis = segments
            .iter()
            .all(|s| s.delta == 0.0 && s.phase == first.phase);
        if single_axis {
            let angle: f64 = segments.iter().map(|s| s.rabi * s.dt).sum();
            return UnitaryOp::rotation(angle, first.phase);
        }
    }
    segments
        .iter()
        .fold(UnitaryOp::identity(), |acc, s| s.propagator() * acc)
}

/// Free precession at detuning `delta` for `dt`.
pub fn free_evolution(delta: f64, dt: f64) -> UnitaryOp {
    UnitaryOp::from_segment(0.0, 0.0, delta, dt)
}

/// Propagator of one pulse followed by its gap, any post-delay and Z kick.
pub fn pulse_propagator(
    spec: &PulseSpec,
    drive: &DriveParams,
    noise: &PulseNoise,
    t0: f64,
) -> Result<UnitaryOp> {
    spec.validate()?;
    let spec = spec.with_phase_offset(noise.phase);
    let mut segments = Vec::with_capacity(2 * drive.ramp_steps + 16);
    pulse_segments(
        &spec,
        drive,
        &noise.trace,
        t0,
        noise.detuning,
        &mut segments,
    );
    let mut u = segments_propagator(&segments);
    let delta = drive.detuning + noise.detuning;
    let idle = spec.gap_time + noise.post_delay;
    if idle > 0.0 {
        u = free_evolution(delta, idle) * u;
    }
    if noise.z_kick != 0.0 {
        u = UnitaryOp::z_rotation(noise.z_kick) * u;
    }
    Ok(u)
}

/// Evolves `state` through one pulse and its gap.
pub fn evolve_pulse(
    state: &QubitState,
    spec: &PulseSpec,
    drive: &DriveParams,
    trace: Option<&AmplitudeTrace>,
) -> Result<QubitState> {
    state.check_normalized()?;
    drive.validate()?;
    let noise = PulseNoise {
        trace: trace.cloned().unwrap_or_default(),
        ..PulseNoise::default()
    };
    Ok(pulse_propagator(spec, drive, &noise, 0.0)?.apply(state))
}

/// Evolves through a list of pulses, asking `hook` for per-pulse noise.
pub fn evolve_pulses(
    state: &QubitState,
    pulses: &[PulseSpec],
    drive: &DriveParams,
    hook: &mut dyn PulseHook,
) -> Result<QubitState> {
    state.check_normalized()?;
    drive.validate()?;
    let mut psi = *state;
    let mut t = 0.0;
    for (i, spec) in pulses.iter().enumerate() {
        let noise = hook.pulse(i, t);
        psi = pulse_propagator(spec, drive, &noise, t)?.apply(&psi);
        t += spec.duration_with_gap() + noise.post_delay;
    }
    Ok(psi)
}

/// Pulse list for a benchmarking sequence, recovery gate included.
pub fn sequence_pulses(seq: &GateSequence, timing: &PulseTiming) -> Vec<PulseSpec> {
    seq.pulses()
        .map(|label| PulseSpec::new(label, timing))
        .collect()
}

/// Evolves through every pulse of `seq`, recovery gate included.
pub fn evolve_sequence(
    state: &QubitState,
    seq: &GateSequence,
    timing: &PulseTiming,
    drive: &DriveParams,
    hook: &mut dyn PulseHook,
) -> Result<QubitState> {
    evolve_pulses(state, &sequence_pulses(seq, timing), drive, hook)
}
