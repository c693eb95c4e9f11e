// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Overlap of a phase PSD with a filter function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::filter::FilterKernel;
use super::psd::PhasePsd;
use super::timeline::ControlTimeline;

/// Fraction of the integral allowed in the outermost decade before warning.
pub const EDGE_MASS_LIMIT: f64 = 0.01;

/// Log-spaced adaptive Simpson quadrature settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    /// Initial panels per decade of ω.
    pub points_per_decade: usize,
    /// Relative tolerance of the adaptive refinement.
    pub rel_tol: f64,
    /// Maximum bisection depth per panel; zero gives plain composite Simpson.
    pub max_depth: u32,
    /// Integration band in rad/s; defaults to the tabulated band of the PSD.
    pub band: Option<(f64, f64)>,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            points_per_decade: 32,
            rel_tol: 1e-7,
            max_depth: 12,
            band: None,
        }
    }
}

impl Quadrature {
    pub fn fixed(points_per_decade: usize) -> Self {
        Self {
            points_per_decade,
            max_depth: 0,
            ..Self::default()
        }
    }

    pub fn with_band(mut self, lo: f64, hi: f64) -> Self {
        self.band = Some((lo, hi));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_decade == 0 {
            return Err(invalid("quadrature needs at least one point per decade"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(invalid("quadrature tolerance must be positive"));
        }
        if let Some((lo, hi)) = self.band {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(invalid("quadrature band must satisfy 0 < lo < hi"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiResult {
    pub chi: f64,
    /// `½(1 + e^{−χ})`.
    pub fidelity: f64,
    /// Largest share of `χ` coming from either outermost decade of the band.
    pub edge_fraction: f64,
    /// True when `edge_fraction` exceeds the limit.
    pub edge_warning: bool,
}

impl ChiResult {
    fn new(chi: f64, edge_mass: f64) -> Self {
        let chi = chi.max(0.0);
        let edge_fraction = if chi > 0.0 { edge_mass / chi } else { 0.0 };
        Self {
            chi,
            fidelity: 0.5 * (1.0 + (-chi).exp()),
            edge_fraction,
            edge_warning: edge_fraction > EDGE_MASS_LIMIT,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    if depth == 0 {
        return whole;
    }
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, fa, m, fm, flm, 0.5 * tol, depth - 1)
        + simpson(f, m, fm, b, fb, frm, 0.5 * tol, depth - 1)
}

/// `(1/π)∫ S(ω) G(ω) dω` over `[lo, hi]` on a log grid, with the mass in each
/// outermost decade.
fn log_quadrature(
    integrand: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    quad: &Quadrature,
) -> (f64, f64) {
    let (ua, ub) = (lo.ln(), hi.ln());
    let decades = (hi / lo).log10();
    let panels = ((decades * quad.points_per_decade as f64).ceil() as usize).max(1);
    let h = (ub - ua) / panels as f64;
    let f = |u: f64| {
        let w = u.exp();
        integrand(w) * w / PI
    };
    let nodes: Vec<f64> = (0..=2 * panels)
        .map(|i| f(ua + 0.5 * h * i as f64))
        .collect();
    let coarse: f64 = (0..panels)
        .map(|i| h / 6.0 * (nodes[2 * i] + 4.0 * nodes[2 * i + 1] + nodes[2 * i + 2]))
        .sum();
    let tol = quad.rel_tol * coarse.abs().max(f64::MIN_POSITIVE) / panels as f64;
    let (edge_lo, edge_hi) = ((lo * 10.0).min(hi).ln(), (hi / 10.0).max(lo).ln());
    let (mut total, mut low_mass, mut high_mass) = (0.0, 0.0, 0.0);
    for i in 0..panels {
        let a = ua + h * i as f64;
        let v = simpson(
            &f,
            a,
            nodes[2 * i],
            a + h,
            nodes[2 * i + 2],
            nodes[2 * i + 1],
            tol,
            quad.max_depth,
        );
        total += v;
        let mid = a + 0.5 * h;
        if mid < edge_lo {
            low_mass += v;
        }
        if mid > edge_hi {
            high_mass += v;
        }
    }
    (total, low_mass.max(high_mass))
}

/// `χ` for an arbitrary filter function, integrating the full PSD over the
/// quadrature band.
pub fn chi_overlap_fn(
    psd: &PhasePsd,
    g: impl Fn(f64) -> f64,
    quad: &Quadrature,
) -> Result<ChiResult> {
    quad.validate()?;
    let (lo, hi) = quad
        .band
        .or_else(|| psd.band())
        .ok_or_else(|| invalid("no integration band: set one or tabulate the PSD"))?;
    let (chi, edge) = log_quadrature(&|w| psd.value(w) * g(w), lo, hi, quad);
    Ok(ChiResult::new(chi, edge))
}

/// `χ` of a control timeline.
///
/// The white frequency-noise part of the PSD is integrated over all ω in
/// closed form, `(S_δ/4)∫|y_⊥|² dt`; the tabulated part by quadrature.
pub fn chi_overlap(
    psd: &PhasePsd,
    timeline: &ControlTimeline,
    quad: &Quadrature,
) -> Result<ChiResult> {
    chi_for_kernel(psd, &FilterKernel::new(timeline), quad)
}

pub(crate) fn chi_for_kernel(
    psd: &PhasePsd,
    kernel: &FilterKernel,
    quad: &Quadrature,
) -> Result<ChiResult> {
    quad.validate()?;
    let white = 0.25 * psd.white_frequency_density() * kernel.white_weight();
    let band = quad.band.or_else(|| psd.band());
    let (tab, edge) = match band {
        Some((lo, hi)) if psd.samples().iter().any(|s| s.1 > 0.0) => {
            log_quadrature(&|w| psd.tabulated_value(w) * kernel.g(w), lo, hi, quad)
        }
        _ => (0.0, 0.0),
    };
    Ok(ChiResult::new(white + tab, edge))
}
