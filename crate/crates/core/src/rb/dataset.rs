// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::plan::RbMode;

/// Error count of one sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceCounts {
    pub length: u64,
    pub seq_id: u64,
    pub errors: u64,
    pub shots: u64,
}

/// Counts pooled over all sequences of one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PooledCounts {
    pub length: u64,
    pub errors: u64,
    pub shots: u64,
}

impl PooledCounts {
    pub fn survival(&self) -> f64 {
        1.0 - self.errors as f64 / self.shots as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbMetadata {
    pub mode: RbMode,
    pub gate_time: f64,
    pub seed: u64,
    #[serde(default)]
    pub irmb_delay: f64,
}

/// Binary outcome counts of a benchmarking run. Lengths count Cliffords,
/// excluding the recovery gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbDataset {
    pub metadata: RbMetadata,
    pub records: Vec<SequenceCounts>,
}

impl RbDataset {
    pub fn new(metadata: RbMetadata, records: Vec<SequenceCounts>) -> Result<Self> {
        let ds = Self { metadata, records };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self.records.iter().find(|r| r.errors > r.shots) {
            return Err(invalid(format!(
                "sequence {} has more errors than shots",
                bad.seq_id
            )));
        }
        Ok(())
    }

    /// Totals per length, in increasing length order.
    pub fn pooled(&self) -> Vec<PooledCounts> {
        let mut map: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
        for r in &self.records {
            let e = map.entry(r.length).or_default();
            e.0 += r.errors;
            e.1 += r.shots;
        }
        map.into_iter()
            .map(|(length, (errors, shots))| PooledCounts {
                length,
                errors,
                shots,
            })
            .collect()
    }

    pub fn total_shots(&self) -> u64 {
        self.records.iter().map(|r| r.shots).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ds: Self = serde_json::from_str(text)?;
        ds.validate()?;
        Ok(ds)
    }

    /// Writes `length,seq_id,errors,shots` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, metadata: RbMetadata) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(reader);
        let records = rd
            .deserialize()
            .collect::<std::result::Result<Vec<SequenceCounts>, _>>()?;
        Self::new(metadata, records)
    }
}
