// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-sideband phase noise curves and the phase PSD derived from them.

use std::f64::consts::TAU;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Thermal SSB floor in dBc/Hz for a carrier of `carrier_dbm` at `temperature` K.
pub fn thermal_floor_dbc(temperature: f64, carrier_dbm: f64) -> f64 {
    30.0 + 10.0 * (BOLTZMANN * temperature).log10() - carrier_dbm
}

/// Measured SSB phase noise, `(offset Hz, L dBc/Hz)` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsbCurve {
    points: Vec<(f64, f64)>,
}

impl SsbCurve {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("SSB curve has no rows"));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(invalid("SSB frequencies must be strictly increasing"));
            }
        }
        if points
            .iter()
            .any(|&(f, l)| !(f > 0.0) || !f.is_finite() || !l.is_finite())
        {
            return Err(invalid(
                "SSB rows need positive frequencies and finite levels",
            ));
        }
        Ok(Self { points })
    }

    /// Reads a headerless or headed two-column CSV of frequency and level.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut points = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(invalid(format!("row {} has {} columns", i + 1, rec.len())));
            }
            let parse = |s: &str| s.parse::<f64>();
            match (parse(&rec[0]), parse(&rec[1])) {
                (Ok(f), Ok(l)) => points.push((f, l)),
                // A non-numeric first row is a header.
                _ if i == 0 => continue,
                _ => return Err(invalid(format!("row {} is not numeric", i + 1))),
            }
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Level at `f` Hz, linear in log-frequency between rows and flat outside.
    pub fn level(&self, f: f64) -> f64 {
        interpolate_log_x(&self.points, f)
    }
}

fn interpolate_log_x(points: &[(f64, f64)], x: f64) -> f64 {
    let first = points[0];
    let last = points[points.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let i = points.partition_point(|p| p.0 <= x);
    let (a, b) = (points[i - 1], points[i]);
    let t = (x / a.0).ln() / (b.0 / a.0).ln();
    a.1 + t * (b.1 - a.1)
}

/// Unilateral phase PSD `S_φ(ω)` in rad²/Hz, indexed by angular frequency.
///
/// A tabulated part is interpolated log-log between samples and held flat
/// outside them. An optional white frequency-noise part `S_δ/ω²` extends over
/// all frequencies; its overlap with any control sequence is evaluated exactly.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhasePsd {
    /// `(ω rad/s, S_φ rad²/Hz)` samples.
    #[serde(default)]
    samples: Vec<(f64, f64)>,
    /// One-sided frequency-noise density `S_δ` in rad²/s.
    #[serde(default)]
    white_frequency: f64,
}

impl PhasePsd {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(invalid("PSD frequencies must be strictly increasing"));
            }
        }
        for &(w, s) in &samples {
            if !(w > 0.0) || !w.is_finite() {
                return Err(invalid("PSD frequencies must be positive"));
            }
            if !(s >= 0.0) || !s.is_finite() {
                return Err(invalid(format!(
                    "PSD value {s} at {w:.3e} rad/s is negative"
                )));
            }
        }
        Ok(Self {
            samples,
            white_frequency: 0.0,
        })
    }

    /// White frequency noise of one-sided density `s_delta` (rad²/s).
    pub fn white_frequency(s_delta: f64) -> Result<Self> {
        Self::default().with_white_frequency(s_delta)
    }

    /// White frequency noise giving Ramsey coherence `exp(−τ/t2)`.
    pub fn from_t2(t2: f64) -> Result<Self> {
        if !(t2 > 0.0) {
            return Err(invalid("t2 must be positive"));
        }
        Self::white_frequency(4.0 / t2)
    }

    pub fn with_white_frequency(mut self, s_delta: f64) -> Result<Self> {
        if !(s_delta >= 0.0) || !s_delta.is_finite() {
            return Err(invalid(
                "white frequency-noise density must be non-negative",
            ));
        }
        self.white_frequency = s_delta;
        Ok(self)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn white_frequency_density(&self) -> f64 {
        self.white_frequency
    }

    /// Coherence time of the white frequency-noise part alone.
    pub fn white_t2(&self) -> Option<f64> {
        (self.white_frequency > 0.0).then(|| 4.0 / self.white_frequency)
    }

    /// Angular-frequency range of the tabulated part.
    pub fn band(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.0, self.samples.last()?.0))
    }

    pub fn is_zero(&self) -> bool {
        self.white_frequency == 0.0 && self.samples.iter().all(|s| s.1 == 0.0)
    }

    /// Tabulated part at `omega`.
    pub fn tabulated_value(&self, omega: f64) -> f64 {
        let pts = &self.samples;
        if pts.is_empty() {
            return 0.0;
        }
        if omega <= pts[0].0 {
            return pts[0].1;
        }
        if omega >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let i = pts.partition_point(|p| p.0 <= omega);
        let (a, b) = (pts[i - 1], pts[i]);
        let t = (omega / a.0).ln() / (b.0 / a.0).ln();
        if a.1 > 0.0 && b.1 > 0.0 {
            (a.1.ln() + t * (b.1 / a.1).ln()).exp()
        } else {
            a.1 + t * (b.1 - a.1)
        }
    }

    pub fn value(&self, omega: f64) -> f64 {
        let white = if self.white_frequency > 0.0 {
            self.white_frequency / (omega * omega)
        } else {
            0.0
        };
        self.tabulated_value(omega) + white
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k >= 0.0) {
            return Err(invalid("PSD scale must be non-negative"));
        }
        Ok(Self {
            samples: self.samples.iter().map(|&(w, s)| (w, s * k)).collect(),
            white_frequency: self.white_frequency * k,
        })
    }

    /// Pointwise sum, tabulated on the union of both sample grids.
    pub fn plus(&self, other: &PhasePsd) -> Result<Self> {
        let mut grid: Vec<f64> = self
            .samples
            .iter()
            .chain(&other.samples)
            .map(|s| s.0)
            .collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let samples = grid
            .into_iter()
            .map(|w| (w, self.tabulated_value(w) + other.tabulated_value(w)))
            .collect();
        Self::tabulated(samples)?.with_white_frequency(self.white_frequency + other.white_frequency)
    }
}

/// `S_φ = 2·10^{L/10}` at every row, with frequencies converted to rad/s.
pub fn ssb_to_psd(curve: &SsbCurve) -> PhasePsd {
    PhasePsd {
        samples: curve
            .points
            .iter()
            .map(|&(f, l)| (TAU * f, 2.0 * 10f64.powf(l / 10.0)))
            .collect(),
        white_frequency: 0.0,
    }
}

/// Synthetic drive-chain phase noise: a local-oscillator white
/// frequency-noise term set by `t2` plus a flat amplifier floor of
/// `floor_dbc` dBc/Hz between 10 kHz and 1 MHz. Not measured data.
pub fn synthetic_psd(t2: f64, floor_dbc: f64) -> Result<PhasePsd> {
    let floor = 2.0 * 10f64.powf(floor_dbc / 10.0);
    let samples = (0..=8)
        .map(|i| (TAU * 1e4 * 10f64.powf(i as f64 / 4.0), floor))
        .collect();
    PhasePsd::tabulated(samples)?.with_white_frequency(4.0 / t2)
}

/// Default synthetic stand-in, tuned to a 69 s decoherence time.
pub const SYNTHETIC_T2: f64 = 69.0;
pub const SYNTHETIC_FLOOR_DBC: f64 = -150.0;
