// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation and analysis toolkit for high-fidelity single-qubit microwave
//! gates on trapped ions.
//!
//! The crate covers pulse-level evolution, stochastic noise channels,
//! randomised benchmarking with maximum-likelihood fitting, closed-loop
//! calibration and Walsh drift spectroscopy, filter-function decoherence
//! prediction and an analytic per-mechanism error budget.

pub mod budget;
pub mod calibration;
pub mod clifford;
pub mod error;
pub mod estimator;
pub mod ffunc;
pub mod linalg;
pub mod noise;
pub mod optim;
pub mod pulse;
pub mod rb;
pub mod sim;

pub use clifford::{
    min_pulse_decomposition, CliffordElement, CliffordGroup, CliffordIndex, GateSequence,
    ShelveChoice,
};
pub use error::{Error, Result};
pub use linalg::{QubitState, So3, UnitaryOp};
pub use pulse::{PulseLabel, PulseSpec, PulseTiming};
