// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordIndex, GateSequence, ShelveChoice, GROUP_ORDER};
use crate::error::{invalid, Result};
use crate::noise::rng::{purpose, StreamKey};

/// Which benchmarking experiment a plan describes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RbMode {
    #[default]
    Gate,
    /// Every pulse replaced by a delay of equal duration.
    Idle,
    /// A delay inserted after every pulse.
    Irmb,
}

/// Longest sequence in the default plan.
pub const DEFAULT_MAX_LENGTH: u64 = 30_000;

/// Five lengths spaced geometrically from 1 to `max`, rounded to integers.
pub fn geometric_lengths(count: usize, max: u64) -> Vec<u64> {
    if count <= 1 {
        return vec![max];
    }
    let mut out: Vec<u64> = (0..count)
        .map(|i| ((max as f64).powf(i as f64 / (count - 1) as f64)).round() as u64)
        .collect();
    out.dedup();
    out
}

/// Experiment settings. Lengths count Cliffords, excluding the recovery gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RbConfig {
    #[serde(default = "default_lengths")]
    pub lengths: Vec<u64>,
    #[serde(default = "default_seqs")]
    pub seqs_per_length: u32,
    #[serde(default = "default_shots")]
    pub shots_per_seq: u32,
    /// Mean wall-clock time per Clifford in seconds.
    pub gate_time: f64,
    #[serde(default)]
    pub mode: RbMode,
    /// Delay after each pulse in IRMB mode, in seconds.
    #[serde(default)]
    pub irmb_delay: f64,
    #[serde(default)]
    pub master_seed: u64,
}

fn default_lengths() -> Vec<u64> {
    geometric_lengths(5, DEFAULT_MAX_LENGTH)
}

fn default_seqs() -> u32 {
    30
}

fn default_shots() -> u32 {
    100
}

impl RbConfig {
    pub fn new(gate_time: f64) -> Self {
        Self {
            lengths: default_lengths(),
            seqs_per_length: default_seqs(),
            shots_per_seq: default_shots(),
            gate_time,
            mode: RbMode::Gate,
            irmb_delay: 0.0,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() {
            return Err(invalid("plan needs at least one length"));
        }
        if self.lengths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("lengths must be strictly increasing"));
        }
        if self.seqs_per_length == 0 || self.shots_per_seq == 0 {
            return Err(invalid("sequence and shot counts must be at least 1"));
        }
        if !(self.gate_time > 0.0) {
            return Err(invalid("gate_time must be positive"));
        }
        if !(self.irmb_delay >= 0.0) {
            return Err(invalid("irmb_delay must be non-negative"));
        }
        if self.mode != RbMode::Irmb && self.irmb_delay != 0.0 {
            return Err(invalid("irmb_delay is only meaningful in irmb mode"));
        }
        Ok(())
    }
}

/// One sequence of a plan with its identifiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannedSequence {
    pub length: u64,
    /// Unique across the plan; keys the random streams of this sequence.
    pub seq_id: u64,
    pub sequence: GateSequence,
}

/// A configuration with every sequence materialised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbPlan {
    pub config: RbConfig,
    pub sequences: Vec<PlannedSequence>,
}

/// Draws every sequence of `config`. Cliffords, prepared state and shelve
/// choice are uniform and depend only on the master seed and sequence id.
pub fn generate_plan(config: &RbConfig) -> Result<RbPlan> {
    config.validate()?;
    let key = StreamKey::new(config.master_seed);
    let mut sequences = Vec::with_capacity(config.lengths.len() * config.seqs_per_length as usize);
    let mut seq_id = 0u64;
    for &length in &config.lengths {
        for _ in 0..config.seqs_per_length {
            let mut rng = key.sequence(seq_id).rng(purpose::PLAN);
            let cliffords: Vec<CliffordIndex> = (0..length)
                .map(|_| rng.random_range(0..GROUP_ORDER) as CliffordIndex)
                .collect();
            let prepared = rng.random_range(0..2u8);
            let shelve = if rng.random_bool(0.5) {
                ShelveChoice::Expected
            } else {
                ShelveChoice::Other
            };
            sequences.push(PlannedSequence {
                length,
                seq_id,
                sequence: GateSequence::new(cliffords, prepared, shelve)?,
            });
            seq_id += 1;
        }
    }
    Ok(RbPlan {
        config: config.clone(),
        sequences,
    })
}
