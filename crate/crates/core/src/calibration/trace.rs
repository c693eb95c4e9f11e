// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalKind {
    Amplitude,
    Frequency,
}

/// One step of a calibration loop, as written to the trace log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalRecord {
    pub kind: CalKind,
    /// Simulated wall-clock time of the step in seconds.
    pub time: f64,
    /// Pulse groups (amplitude) or pulse pairs (frequency).
    pub n: u64,
    pub p0: f64,
    /// Relative amplitude offset or detuning in Hz.
    pub estimate: f64,
    /// Correction applied after the step, in the same units; zero if none.
    pub correction: f64,
}

/// Writes one JSON object per line.
pub fn write_trace<W: Write>(records: &[CalRecord], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads records written by [`write_trace`], skipping blank and `#` lines.
pub fn read_trace<R: BufRead>(input: R) -> Result<Vec<CalRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() && !line.starts_with('#') {
            out.push(serde_json::from_str(line)?);
        }
    }
    Ok(out)
}
