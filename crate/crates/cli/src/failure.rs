// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

/// A machine-readable error record, written to stderr as one JSON line.
#[derive(Debug, Serialize)]
pub struct Failure {
    /// `usage`, `config`, `validation`, `run` or `io`.
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: "config",
            message: message.into(),
        }
    }

    pub fn validation(err: impl std::fmt::Display) -> Self {
        Self {
            kind: "validation",
            message: err.to_string(),
        }
    }

    pub fn run(err: impl std::fmt::Display) -> Self {
        Self {
            kind: "run",
            message: err.to_string(),
        }
    }

    pub fn io(err: impl std::fmt::Display) -> Self {
        Self {
            kind: "io",
            message: err.to_string(),
        }
    }

    /// Rejected inputs exit with 2, failures during a run with 1.
    pub fn exit_code(&self) -> u8 {
        match self.kind {
            "config" | "validation" | "usage" => 2,
            _ => 1,
        }
    }
}

impl From<ionbench_core::Error> for Failure {
    fn from(err: ionbench_core::Error) -> Self {
        match err {
            ionbench_core::Error::InvalidInput(_) => Failure::validation(err),
            ionbench_core::Error::Io(_) => Failure::io(err),
            _ => Failure::run(err),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::io(err)
    }
}
