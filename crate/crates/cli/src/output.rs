// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Output files. Every file starts with the command, config hash and seed:
//! CSV and JSON-lines files as `#` comment lines, JSON files as a `header`
//! object. Nothing time-dependent is written, so reruns are byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::failure::Failure;

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_sha256: String,
    pub seed: u64,
}

pub struct OutDir {
    dir: PathBuf,
    header: Header,
    written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(dir: &Path, header: Header) -> Result<Self, Failure> {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            header,
            written: Vec::new(),
        })
    }

    fn comment_block(&self) -> String {
        let h = &self.header;
        format!(
            "# {} {} {}\n# config_sha256: {}\n# seed: {}\n",
            h.tool, h.version, h.command, h.config_sha256, h.seed
        )
    }

    fn write(&mut self, name: &str, body: &[u8]) -> Result<(), Failure> {
        let path = self.dir.join(name);
        fs::write(&path, body)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    /// CSV or JSON-lines body produced by `fill`, after the comment header.
    pub fn text(
        &mut self,
        name: &str,
        fill: impl FnOnce(&mut Vec<u8>) -> ionbench_core::Result<()>,
    ) -> Result<(), Failure> {
        let mut body = self.comment_block().into_bytes();
        fill(&mut body)?;
        self.write(name, &body)
    }

    /// `{"header": ..., "result": ...}`, pretty-printed.
    pub fn json<T: Serialize>(&mut self, name: &str, result: &T) -> Result<(), Failure> {
        #[derive(Serialize)]
        struct Doc<'a, T> {
            header: &'a Header,
            result: &'a T,
        }
        let mut body = serde_json::to_vec_pretty(&Doc {
            header: &self.header,
            result,
        })
        .map_err(Failure::run)?;
        body.push(b'\n');
        self.write(name, &body)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Writes a simple CSV with the given header row.
pub fn csv_rows<W: Write>(
    out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> ionbench_core::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip representation, in exponent form.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}
