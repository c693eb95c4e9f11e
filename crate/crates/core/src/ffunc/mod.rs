// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Phase-noise PSDs and filter-function predictions of decoherence.

mod chi;
mod filter;
mod irmb;
mod monte_carlo;
mod psd;
mod timeline;

pub use chi::{chi_overlap, chi_overlap_fn, ChiResult, Quadrature, EDGE_MASS_LIMIT};
pub use filter::{filter_function, ramsey_filter, spin_echo_filter, FilterKernel};
pub use irmb::{
    predict_irmb, write_prediction_csv, IrmbPoint, IrmbPredictConfig, IrmbPrediction,
    MIN_RANDOM_SEQS,
};
pub use monte_carlo::ramsey_monte_carlo;
pub use psd::{
    ssb_to_psd, synthetic_psd, thermal_floor_dbc, PhasePsd, SsbCurve, BOLTZMANN,
    SYNTHETIC_FLOOR_DBC, SYNTHETIC_T2,
};
pub use timeline::{ControlTimeline, Segment};
