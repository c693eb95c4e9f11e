// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{QubitState, UnitaryOp};
use crate::noise::rng::{purpose, StreamKey};
use crate::noise::{
    quantize_amplitude, sample_shot_amplitude, AmplitudeNoiseModel, QuantizerConfig,
};
use crate::pulse::{PulseLabel, PulseSpec, PulseTiming};
use crate::sim::{pulse_propagator, AmplitudeTrace, DriveParams, PulseNoise};

/// Pulse train as runs of identical pulses, in time order.
pub type PulseTrain = Vec<(PulseLabel, u64)>;

/// The simulated qubit and drive chain that a calibration acts on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalTarget {
    pub timing: PulseTiming,
    /// Drive settings; `detuning` is the correctable frequency offset.
    pub drive: DriveParams,
    /// Per-shot amplitude offsets and in-shot drifts, relative to Ω_q.
    pub amplitude: AmplitudeNoiseModel,
    pub quantizer: QuantizerConfig,
    /// Programmed AWG amplitude in `[0, 1]`.
    pub setting: f64,
    /// AWG amplitude that gives Ω_q when the chain has not drifted.
    pub nominal_setting: f64,
    /// Slow relative drift of the drive chain gain.
    pub gain_drift: f64,
}

impl CalTarget {
    /// Target driven at the quantised nominal amplitude with no noise.
    pub fn new(timing: PulseTiming) -> Result<Self> {
        timing.validate()?;
        let quantizer = QuantizerConfig::default();
        let drive = DriveParams::for_pulse(&PulseSpec::new(PulseLabel::PlusX, &timing));
        Ok(Self {
            timing,
            drive,
            amplitude: AmplitudeNoiseModel::default(),
            quantizer,
            setting: quantize_amplitude(&quantizer, quantizer.amp_scale)?,
            nominal_setting: quantizer.amp_scale,
            gain_drift: 0.0,
        })
    }

    /// Target with contiguous rectangular pulses, as in the closed-form analysis.
    pub fn square(t_half_pi: f64) -> Result<Self> {
        let timing = PulseTiming {
            t_half_pi,
            ramp_time: 0.0,
            gap_time: 0.0,
        };
        let mut t = Self::new(timing)?;
        t.setting = t.nominal_setting;
        Ok(t)
    }

    /// Rabi frequency relative to Ω_q before per-shot noise.
    pub fn relative_amplitude(&self) -> f64 {
        self.setting / self.nominal_setting * (1.0 + self.gain_drift)
    }

    /// Systematic relative amplitude error.
    pub fn amplitude_offset(&self) -> f64 {
        self.relative_amplitude() - 1.0
    }

    /// Rescales the programmed amplitude to cancel a measured relative offset.
    pub fn correct_amplitude(&mut self, offset: f64) -> Result<()> {
        let requested = (self.setting / (1.0 + offset)).clamp(0.0, 1.0);
        self.setting = quantize_amplitude(&self.quantizer, requested)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.timing.validate()?;
        self.drive.validate()?;
        self.amplitude.validate()?;
        self.quantizer.validate()?;
        if !(self.nominal_setting > 0.0) || !(0.0..=1.0).contains(&self.setting) {
            return Err(invalid("amplitude settings out of range"));
        }
        Ok(())
    }

    fn spec(&self, label: PulseLabel) -> PulseSpec {
        PulseSpec {
            amp_scale: self.relative_amplitude(),
            ..PulseSpec::new(label, &self.timing)
        }
    }

    /// Probability of `|0⟩` after `train` for one realisation of the
    /// per-shot coefficients.
    pub fn survival_for(&self, train: &[(PulseLabel, u64)], coeffs: &[f64]) -> Result<f64> {
        let trace = AmplitudeTrace::polynomial(coeffs.to_vec());
        let mut u = UnitaryOp::identity();
        if trace.is_static() {
            let mut cache: [Option<UnitaryOp>; 4] = [None; 4];
            for &(label, count) in train {
                let slot = PulseLabel::ALL
                    .iter()
                    .position(|&l| l == label)
                    .unwrap_or(0);
                let p = match cache[slot] {
                    Some(p) => p,
                    None => {
                        let noise = PulseNoise {
                            trace: trace.clone(),
                            ..PulseNoise::default()
                        };
                        let p = pulse_propagator(&self.spec(label), &self.drive, &noise, 0.0)?;
                        cache[slot] = Some(p);
                        p
                    }
                };
                u = p.pow(count) * u;
            }
        } else {
            let noise = PulseNoise {
                trace,
                ..PulseNoise::default()
            };
            let mut t = 0.0;
            for &(label, count) in train {
                let spec = self.spec(label);
                for _ in 0..count {
                    u = pulse_propagator(&spec, &self.drive, &noise, t)? * u;
                    t += spec.duration_with_gap();
                }
            }
        }
        Ok(u.apply(&QubitState::basis(0)).probability(0))
    }

    /// Probability of `|0⟩` with the per-shot coefficients at their means.
    pub fn mean_survival(&self, train: &[(PulseLabel, u64)]) -> Result<f64> {
        self.survival_for(train, &self.amplitude.mu)
    }

    /// Runs `shots` repetitions of `train` and counts `|0⟩` outcomes.
    pub fn measure(
        &self,
        train: &[(PulseLabel, u64)],
        shots: u64,
        key: StreamKey,
    ) -> Result<Measurement> {
        self.validate()?;
        if shots == 0 {
            return Err(invalid("a measurement needs at least one shot"));
        }
        let mut outcome_rng = key.rng(purpose::OUTCOME);
        let (expected, bright) = if self.amplitude.is_deterministic() {
            let p = self.mean_survival(train)?;
            (p, binomial(shots, p, &mut outcome_rng))
        } else {
            let mut total = 0.0;
            let mut count = 0;
            for s in 0..shots {
                let coeffs = sample_shot_amplitude(
                    &self.amplitude,
                    &mut key.shot(s).rng(purpose::AMPLITUDE),
                );
                let p = self.survival_for(train, &coeffs)?;
                total += p;
                count += binomial(1, p, &mut outcome_rng);
            }
            (total / shots as f64, count)
        };
        Ok(Measurement {
            shots,
            zeros: bright,
            expected,
        })
    }
}

/// Outcome counts of one calibration point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub shots: u64,
    /// Shots that returned `|0⟩`.
    pub zeros: u64,
    /// Noise-averaged `|0⟩` probability the counts were drawn from.
    pub expected: f64,
}

impl Measurement {
    pub fn p0(&self) -> f64 {
        self.zeros as f64 / self.shots as f64
    }

    /// Binomial standard error of `p0` at `p = ½`, the worst case.
    pub fn std_error(&self) -> f64 {
        0.5 / (self.shots as f64).sqrt()
    }
}

pub(crate) fn binomial(n: u64, p: f64, rng: &mut ChaCha8Rng) -> u64 {
    let p = p.clamp(0.0, 1.0);
    if p == 0.0 {
        0
    } else if p == 1.0 {
        n
    } else {
        Binomial::new(n, p).map(|b| b.sample(rng)).unwrap_or(0)
    }
}
