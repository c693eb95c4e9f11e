// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Aggregation of the per-mechanism errors into a budget and its dependence
//! on gate time.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::calibration::CalRecord;
use crate::clifford::CliffordGroup;
use crate::error::{invalid, Result};
use crate::noise::{IdleRates, MotionalModel, QuantizerConfig};
use crate::pulse::PulseTiming;
use crate::rb::DEFAULT_MAX_LENGTH;

use super::rows::{
    err_amp_drift, err_amp_noise, err_awg, err_decoherence, err_harmonic, err_zeeman,
    leakage_rb_error, ZeemanTime,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    Decoherence,
    Leakage,
    AmplitudeNoise,
    HarmonicMotion,
    AmplitudeDrift,
    ZeemanResidual,
    AwgResolution,
    Spectator,
    Ramping,
    NonRwa,
}

impl Mechanism {
    pub const ALL: [Mechanism; 10] = [
        Mechanism::Decoherence,
        Mechanism::Leakage,
        Mechanism::AmplitudeNoise,
        Mechanism::HarmonicMotion,
        Mechanism::AmplitudeDrift,
        Mechanism::ZeemanResidual,
        Mechanism::AwgResolution,
        Mechanism::Spectator,
        Mechanism::Ramping,
        Mechanism::NonRwa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Decoherence => "decoherence",
            Mechanism::Leakage => "leakage",
            Mechanism::AmplitudeNoise => "amplitude_noise",
            Mechanism::HarmonicMotion => "harmonic_motion",
            Mechanism::AmplitudeDrift => "amplitude_drift",
            Mechanism::ZeemanResidual => "zeeman_residual",
            Mechanism::AwgResolution => "awg_resolution",
            Mechanism::Spectator => "spectator",
            Mechanism::Ramping => "ramping",
            Mechanism::NonRwa => "non_rwa",
        }
    }
}

/// Amplitude drift error, given directly or through a calibration log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmpDrift {
    PerGate(f64),
    Log(Vec<CalRecord>),
}

/// Upper bounds for mechanisms evaluated by direct pulse simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulatedBounds {
    pub spectator: f64,
    pub ramping: f64,
    pub non_rwa: f64,
}

impl Default for SimulatedBounds {
    fn default() -> Self {
        Self {
            spectator: 1e-9,
            ramping: 1e-9,
            non_rwa: 1e-10,
        }
    }
}

/// One-sigma uncertainties of the inputs, propagated to first order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputUncertainty {
    #[serde(default)]
    pub t2: f64,
    /// Relative uncertainty of the idle rates.
    #[serde(default)]
    pub idle_rel: f64,
    #[serde(default)]
    pub sigma0: f64,
    #[serde(default)]
    pub heating_rate: f64,
    /// Absolute uncertainty of the amplitude drift row.
    #[serde(default)]
    pub amp_drift: f64,
    #[serde(default)]
    pub zeeman_residual_hz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetInput {
    /// Mean wall-clock time per Clifford in seconds.
    pub gate_time: f64,
    /// π/2 pulse length; derived from `gate_time` when absent.
    #[serde(default)]
    pub t_half_pi: Option<f64>,
    #[serde(default = "default_ppc")]
    pub pulses_per_clifford: f64,
    /// Coherence time of the drive, in seconds.
    pub t2: f64,
    pub idle: IdleRates,
    pub motional: MotionalModel,
    /// Longest benchmarking sequence in Cliffords, for the motional average.
    #[serde(default = "default_max_length")]
    pub max_sequence_length: u64,
    /// Relative shot-to-shot amplitude noise.
    pub sigma0: f64,
    pub amp_drift: AmpDrift,
    pub zeeman_residual_hz: f64,
    #[serde(default)]
    pub zeeman_time: ZeemanTime,
    pub quantizer: QuantizerConfig,
    #[serde(default)]
    pub bounds: SimulatedBounds,
    #[serde(default)]
    pub uncertainty: InputUncertainty,
}

fn default_ppc() -> f64 {
    CliffordGroup::shared().pulses_per_clifford()
}

fn default_max_length() -> u64 {
    DEFAULT_MAX_LENGTH
}

/// Residual Zeeman shift left by the frequency calibration in the reference
/// configuration, in Hz.
pub const REFERENCE_ZEEMAN_RESIDUAL_HZ: f64 = 2.5;

impl BudgetInput {
    /// The reference 13 µs configuration.
    pub fn reference() -> Self {
        Self {
            gate_time: 13e-6,
            t_half_pi: None,
            pulses_per_clifford: default_ppc(),
            t2: 69.0,
            idle: IdleRates::short_delay(),
            motional: MotionalModel::default(),
            max_sequence_length: DEFAULT_MAX_LENGTH,
            sigma0: 1.4e-4,
            amp_drift: AmpDrift::PerGate(9e-9),
            zeeman_residual_hz: REFERENCE_ZEEMAN_RESIDUAL_HZ,
            zeeman_time: ZeemanTime::HalfPi,
            quantizer: QuantizerConfig::default(),
            bounds: SimulatedBounds::default(),
            uncertainty: InputUncertainty {
                t2: 7.0,
                idle_rel: 0.11,
                sigma0: 0.06e-4,
                heating_rate: 50.0,
                amp_drift: 7e-9,
                zeeman_residual_hz: 0.8,
            },
        }
    }

    /// Every mechanism switched off.
    pub fn zeroed(gate_time: f64) -> Self {
        Self {
            gate_time,
            t_half_pi: None,
            pulses_per_clifford: default_ppc(),
            t2: f64::INFINITY,
            idle: IdleRates::zero(),
            motional: MotionalModel {
                eta: 0.0,
                ..MotionalModel::default()
            },
            max_sequence_length: DEFAULT_MAX_LENGTH,
            sigma0: 0.0,
            amp_drift: AmpDrift::PerGate(0.0),
            zeeman_residual_hz: 0.0,
            zeeman_time: ZeemanTime::HalfPi,
            quantizer: QuantizerConfig {
                bits: 52,
                amp_scale: 1.0,
            },
            bounds: SimulatedBounds {
                spectator: 0.0,
                ramping: 0.0,
                non_rwa: 0.0,
            },
            uncertainty: InputUncertainty::default(),
        }
    }

    pub fn timing(&self) -> PulseTiming {
        match self.t_half_pi {
            Some(t) => PulseTiming::new(t),
            None => PulseTiming::from_gate_time(self.gate_time, self.pulses_per_clifford),
        }
    }

    pub fn t_half_pi(&self) -> f64 {
        self.timing().t_half_pi
    }

    /// The same configuration at another gate time, with the π/2 length
    /// scaled in proportion.
    pub fn at_gate_time(&self, gate_time: f64) -> Self {
        let scale = gate_time / self.gate_time;
        Self {
            gate_time,
            t_half_pi: Some(self.t_half_pi() * scale),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gate_time > 0.0) || !(self.pulses_per_clifford > 0.0) {
            return Err(invalid("gate time and pulses per Clifford must be positive"));
        }
        if !(self.t_half_pi() > 0.0) {
            return Err(invalid("t_half_pi must be positive"));
        }
        if !(self.t2 > 0.0) {
            return Err(invalid("t2 must be positive"));
        }
        let b = &self.bounds;
        if [b.spectator, b.ramping, b.non_rwa]
            .iter()
            .any(|&v| !(v >= 0.0))
        {
            return Err(invalid("simulated bounds must be non-negative"));
        }
        if let AmpDrift::PerGate(e) = self.amp_drift {
            if !(e >= 0.0) {
                return Err(invalid("amplitude drift error must be non-negative"));
            }
        }
        self.idle.validate()?;
        self.motional.validate()?;
        self.quantizer.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRow {
    pub mechanism: Mechanism,
    pub error: f64,
    pub uncertainty: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub gate_time: f64,
    /// Estimated contributions; the total is their exact sum.
    pub rows: Vec<BudgetRow>,
    /// Contributions known only as upper bounds, listed separately.
    pub bounds: Vec<BudgetRow>,
    pub total: f64,
    pub total_uncertainty: f64,
}

impl ErrorBudget {
    pub fn row(&self, mechanism: Mechanism) -> Option<&BudgetRow> {
        self.rows
            .iter()
            .chain(&self.bounds)
            .find(|r| r.mechanism == mechanism)
    }

    pub fn error(&self, mechanism: Mechanism) -> f64 {
        self.row(mechanism).map_or(0.0, |r| r.error)
    }

    /// Total with every bound taken at its limit.
    pub fn total_upper(&self) -> f64 {
        self.total + self.bounds.iter().map(|r| r.error).sum::<f64>()
    }

    /// Keeps only the listed mechanisms, recomputing the total.
    pub fn restricted(&self, mechanisms: &[Mechanism]) -> Self {
        let keep = |rows: &[BudgetRow]| -> Vec<BudgetRow> {
            rows.iter()
                .filter(|r| mechanisms.contains(&r.mechanism))
                .copied()
                .collect()
        };
        let rows = keep(&self.rows);
        Self {
            gate_time: self.gate_time,
            total: rows.iter().map(|r| r.error).sum(),
            total_uncertainty: rows
                .iter()
                .map(|r| r.uncertainty * r.uncertainty)
                .sum::<f64>()
                .sqrt(),
            bounds: keep(&self.bounds),
            rows,
        }
    }

    /// Writes `mechanism,error,uncertainty,kind` rows followed by the total.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["mechanism", "error", "uncertainty", "kind"])?;
        for (rows, kind) in [(&self.rows, "estimate"), (&self.bounds, "bound")] {
            for r in rows {
                w.write_record([
                    r.mechanism.name(),
                    &format!("{:e}", r.error),
                    &format!("{:e}", r.uncertainty),
                    kind,
                ])?;
            }
        }
        w.write_record([
            "total",
            &format!("{:e}", self.total),
            &format!("{:e}", self.total_uncertainty),
            "total",
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// Builds the per-mechanism budget.
pub fn budget_table(input: &BudgetInput) -> Result<ErrorBudget> {
    input.validate()?;
    let ppc = input.pulses_per_clifford;
    let timing = input.timing();
    let th = timing.t_half_pi;
    let u = &input.uncertainty;
    let mut rows = Vec::new();
    let mut push = |mechanism, error: f64, uncertainty: f64| {
        rows.push(BudgetRow {
            mechanism,
            error,
            uncertainty: uncertainty.abs(),
        })
    };

    let deco = err_decoherence(ppc, th, input.t2)?;
    push(Mechanism::Decoherence, deco, deco * u.t2 / input.t2);

    let leak = leakage_rb_error(&input.idle, input.gate_time)?;
    push(Mechanism::Leakage, leak, leak * u.idle_rel);

    let amp = err_amp_noise(ppc, input.sigma0)?;
    let amp_u = if input.sigma0 > 0.0 {
        2.0 * amp * u.sigma0 / input.sigma0
    } else {
        0.0
    };
    push(Mechanism::AmplitudeNoise, amp, amp_u);

    let duration = input.max_sequence_length as f64 * input.gate_time;
    let harm = err_harmonic(&input.motional, ppc, th, duration)?;
    let n_mid = input.motional.n_bar(0.5 * duration) + 0.5;
    push(
        Mechanism::HarmonicMotion,
        harm,
        harm * 0.5 * duration * u.heating_rate / n_mid,
    );

    let drift = match &input.amp_drift {
        AmpDrift::PerGate(e) => *e,
        AmpDrift::Log(records) => err_amp_drift(records, ppc)?,
    };
    push(Mechanism::AmplitudeDrift, drift, u.amp_drift);

    let t_z = match input.zeeman_time {
        ZeemanTime::HalfPi => th,
        ZeemanTime::Slot => timing.slot(),
    };
    let zee = err_zeeman(ppc, input.zeeman_residual_hz, t_z)?;
    let zee_u = if input.zeeman_residual_hz != 0.0 {
        2.0 * zee * u.zeeman_residual_hz / input.zeeman_residual_hz.abs()
    } else {
        0.0
    };
    push(Mechanism::ZeemanResidual, zee, zee_u);

    push(Mechanism::AwgResolution, err_awg(ppc, &input.quantizer)?, 0.0);

    let b = &input.bounds;
    let bounds = [
        (Mechanism::Spectator, b.spectator),
        (Mechanism::Ramping, b.ramping),
        (Mechanism::NonRwa, b.non_rwa),
    ]
    .into_iter()
    .map(|(mechanism, error)| BudgetRow {
        mechanism,
        error,
        uncertainty: 0.0,
    })
    .collect();

    let total = rows.iter().map(|r| r.error).sum();
    let total_uncertainty = rows
        .iter()
        .map(|r| r.uncertainty * r.uncertainty)
        .sum::<f64>()
        .sqrt();
    Ok(ErrorBudget {
        gate_time: input.gate_time,
        rows,
        bounds,
        total,
        total_uncertainty,
    })
}

/// One point of the error-versus-gate-time decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub gate_time: f64,
    pub mechanism: Mechanism,
    pub error: f64,
}

/// Evaluates every estimated mechanism at each gate time, scaling the π/2
/// length in proportion. Each gate time also gets a `total` via the budget.
pub fn budget_curve(input: &BudgetInput, gate_times: &[f64]) -> Result<Vec<ErrorBudget>> {
    gate_times
        .iter()
        .map(|&g| {
            if !(g > 0.0) {
                return Err(invalid("gate times must be positive"));
            }
            budget_table(&input.at_gate_time(g))
        })
        .collect()
}

/// Flattens a curve into points, one per gate time and mechanism.
pub fn curve_points(curve: &[ErrorBudget]) -> Vec<CurvePoint> {
    curve
        .iter()
        .flat_map(|b| {
            b.rows.iter().map(|r| CurvePoint {
                gate_time: b.gate_time,
                mechanism: r.mechanism,
                error: r.error,
            })
        })
        .collect()
}

/// Writes `gate_time,mechanism,error` rows for stacked plotting.
pub fn write_curve_csv<W: Write>(curve: &[ErrorBudget], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["gate_time", "mechanism", "error"])?;
    for b in curve {
        for r in &b.rows {
            w.write_record([
                format!("{:e}", b.gate_time),
                r.mechanism.name().to_string(),
                format!("{:e}", r.error),
            ])?;
        }
        w.write_record([
            format!("{:e}", b.gate_time),
            "total".to_string(),
            format!("{:e}", b.total),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `count` gate times spaced logarithmically over `[lo, hi]`.
pub fn gate_time_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return Err(invalid("gate-time grid needs 0 < lo < hi and two points"));
    }
    let step = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count).map(|i| lo * (step * i as f64).exp()).collect())
}
