// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Versioned run configuration. Every section rejects unknown keys.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ionbench_core::budget::{BudgetInput, Mechanism};
use ionbench_core::calibration::{CalLoopConfig, DriftScenario, Sigma0Policy};
use ionbench_core::ffunc::{PhasePsd, Quadrature, SsbCurve, ssb_to_psd, synthetic_psd};
use ionbench_core::noise::{IdleRates, NoiseConfig, QuantizerConfig};
use ionbench_core::rb::{RbConfig, RbMode, RunOptions, SimTier};

use crate::failure::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tier: SimTier,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rb: Option<RbSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idle_rb: Option<IdleRbSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irmb: Option<IrmbSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrate: Option<CalibrateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walsh: Option<WalshSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_noise: Option<PhaseNoiseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<BudgetSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leakage_rates: Option<LeakageSection>,
}

fn default_bootstrap() -> usize {
    1000
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RbSection {
    /// The run seed replaces `plan.master_seed`.
    pub plan: RbConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub options: RunOptions,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdleRbSection {
    pub plan: RbConfig,
    pub idle: IdleRates,
    #[serde(default)]
    pub spam: f64,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrmbSection {
    pub plan: RbConfig,
    /// Delay after every pulse, in seconds, one run each.
    pub delays: Vec<f64>,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub options: RunOptions,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
    /// Filter-function prediction of the same sweep.
    #[serde(default)]
    pub predict: Option<IrmbPredictSection>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrmbPredictSection {
    pub psd: PsdSource,
    #[serde(default = "default_predict_seqs")]
    pub n_random_seqs: u32,
    #[serde(default)]
    pub lengths: Option<Vec<u64>>,
}

fn default_predict_seqs() -> u32 {
    20
}

/// Where a phase-noise spectrum comes from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PsdSource {
    /// White frequency noise with coherence time `t2` plus a flat floor.
    Synthetic { t2: f64, floor_dbc: f64 },
    /// White frequency noise only.
    White { t2: f64 },
    /// Two-column SSB CSV, offset in Hz and level in dBc/Hz. Relative paths
    /// resolve against the config file.
    SsbCsv(PathBuf),
}

impl PsdSource {
    pub fn load(&self, base: &Path) -> Result<PhasePsd, Failure> {
        match self {
            PsdSource::Synthetic { t2, floor_dbc } => {
                synthetic_psd(*t2, *floor_dbc).map_err(Failure::validation)
            }
            PsdSource::White { t2 } => PhasePsd::from_t2(*t2).map_err(Failure::validation),
            PsdSource::SsbCsv(path) => {
                let path = base.join(path);
                let file = fs::File::open(&path).map_err(|e| {
                    Failure::config(format!("cannot open {}: {e}", path.display()))
                })?;
                Ok(ssb_to_psd(
                    &SsbCurve::from_csv(file).map_err(Failure::validation)?,
                ))
            }
        }
    }
}

/// The simulated qubit a calibration acts on.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalSimulator {
    pub gate_time: f64,
    /// Relative shot-to-shot amplitude noise.
    #[serde(default)]
    pub sigma0: f64,
    /// Relative gain error of the drive chain before calibration.
    #[serde(default)]
    pub amplitude_offset: f64,
    /// ac Zeeman shift at full amplitude, in Hz.
    #[serde(default)]
    pub zeeman_hz: f64,
    /// Initial drive detuning, in Hz.
    #[serde(default)]
    pub detuning_hz: f64,
    #[serde(default)]
    pub quantizer: Option<QuantizerConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateSection {
    pub simulator: CalSimulator,
    #[serde(default, rename = "loop")]
    pub loop_config: CalLoopConfig,
    /// Session with a drifting gain, calibrated at a fixed cadence.
    #[serde(default)]
    pub drift: Option<DriftScenario>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalshSection {
    pub gate_time: f64,
    #[serde(default = "default_walsh_orders")]
    pub orders: Vec<u32>,
    #[serde(default = "default_walsh_lengths")]
    pub lengths: Vec<u64>,
    #[serde(default = "default_walsh_shots")]
    pub shots: u64,
    /// Mean polynomial amplitude coefficients relative to Ω_q, per s^k.
    #[serde(default)]
    pub mu: Vec<f64>,
    /// Shot-to-shot deviations of the same coefficients.
    #[serde(default)]
    pub sigma: Vec<f64>,
    #[serde(default)]
    pub sigma0_policy: Sigma0Policy,
}

fn default_walsh_orders() -> Vec<u32> {
    vec![0, 1, 3]
}

fn default_walsh_lengths() -> Vec<u64> {
    vec![16, 64, 128, 256, 512, 768, 1024, 1536, 2048, 3072]
}

fn default_walsh_shots() -> u64 {
    400
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseNoiseSection {
    pub psd: PsdSource,
    /// Free-precession times of the Ramsey and echo predictions, in seconds.
    pub taus: Vec<f64>,
    /// Length of the echo π pulse, in seconds.
    #[serde(default = "default_t_pi")]
    pub t_pi: f64,
    #[serde(default)]
    pub quadrature: Quadrature,
}

fn default_t_pi() -> f64 {
    12e-6
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for CurveSpec {
    fn default() -> Self {
        Self {
            lo: 4.4e-6,
            hi: 35e-6,
            count: 24,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    /// Defaults to the reference 13 µs configuration.
    #[serde(default)]
    pub input: Option<BudgetInput>,
    /// Mechanisms to report; all when absent.
    #[serde(default)]
    pub mechanisms: Option<Vec<Mechanism>>,
    /// Calibration trace whose amplitude records replace the drift input.
    #[serde(default)]
    pub trace: Option<PathBuf>,
    #[serde(default)]
    pub curve: CurveSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticIdle {
    pub rates: IdleRates,
    pub delays: Vec<f64>,
    pub shots: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeakageSection {
    /// JSON list of four-scheme measurements.
    #[serde(default)]
    pub measurements: Option<PathBuf>,
    #[serde(default)]
    pub synthetic: Option<SyntheticIdle>,
    /// Clifford duration for the leakage row, in seconds.
    #[serde(default = "default_gate_time")]
    pub gate_time: f64,
}

fn default_gate_time() -> f64 {
    13e-6
}

/// A parsed configuration with its location and hash.
pub struct Loaded {
    pub config: RunConfig,
    /// Directory relative paths resolve against.
    pub base: PathBuf,
}

impl Loaded {
    pub fn read(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self {
                config: RunConfig {
                    version: SCHEMA_VERSION,
                    ..RunConfig::default()
                },
                base: PathBuf::from("."),
            });
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        let config: RunConfig =
            serde_json::from_str(&text).map_err(|e| Failure::config(e.to_string()))?;
        if config.version != SCHEMA_VERSION {
            return Err(Failure::config(format!(
                "unsupported config version {}, expected {SCHEMA_VERSION}",
                config.version
            )));
        }
        Ok(Self {
            config,
            base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        })
    }

    /// SHA-256 of the canonical serialisation of the effective configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(&self.config).expect("config serialises");
        hex::encode(Sha256::digest(canonical))
    }
}

/// Checks a plan and pins its seed and mode.
pub fn prepare_plan(plan: &RbConfig, seed: u64, mode: RbMode) -> Result<RbConfig, Failure> {
    if plan.mode != RbMode::Gate && plan.mode != mode {
        return Err(Failure::config(format!(
            "plan mode {:?} does not match this command",
            plan.mode
        )));
    }
    let mut plan = plan.clone();
    plan.master_seed = seed;
    plan.mode = mode;
    Ok(plan)
}

pub fn require<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
    section
        .as_ref()
        .ok_or_else(|| Failure::config(format!("config has no `{name}` section")))
}
