// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors surfaced by the simulation and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state is not normalised (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("negative duration: {what} = {value}")]
    NegativeDuration { what: &'static str, value: f64 },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("signal outside the linear regime: |P - 1/2| = {deviation:.4}")]
    OutsideLinearRegime { deviation: f64 },

    #[error("parameters are not identifiable: {0}")]
    Unidentifiable(String),

    #[error("bootstrap failed: {failed} of {total} refits did not converge")]
    Bootstrap { failed: usize, total: usize },

    #[error("model validity exceeded: {0}")]
    ModelValidity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
