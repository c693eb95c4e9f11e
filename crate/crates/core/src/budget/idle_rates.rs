// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Idle error rates from delay measurements with four shelving schemes.
//!
//! The ion is prepared in `|0⟩` or `|1⟩`, left idle and read out after
//! shelving a chosen set of qubit states. For small rates the error
//! probabilities grow with delay `t` as
//!
//! | scheme | shelved    | error slope            |
//! |--------|------------|------------------------|
//! | a      | none       | `ε_b`                  |
//! | b      | prepared   | `P_flip + ε_d + P_L`   |
//! | c      | other      | `P_flip + ε_b`         |
//! | d      | both       | `ε_d + P_L`            |
//!
//! so `c − a` and `b − d` give two independent bit-flip estimates.

use nalgebra::{Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::noise::{readout_error_probability, IdleRates, ShelveSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    A,
    B,
    C,
    D,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::A, Scheme::B, Scheme::C, Scheme::D];

    pub fn shelve(self) -> ShelveSet {
        match self {
            Scheme::A => ShelveSet::None,
            Scheme::B => ShelveSet::Reference,
            Scheme::C => ShelveSet::Other,
            Scheme::D => ShelveSet::Both,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Error counts at one delay for one scheme and preparation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdleMeasurement {
    pub scheme: Scheme,
    pub prepared: u8,
    /// Idle delay in seconds.
    pub delay: f64,
    pub errors: u64,
    pub shots: u64,
}

/// A value with its one-sigma uncertainty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub sigma: f64,
}

impl Estimate {
    /// True when `truth` lies within `k` standard deviations.
    pub fn covers(&self, truth: f64, k: f64) -> bool {
        (self.value - truth).abs() <= k * self.sigma
    }

    /// One-sided upper bound at `k` sigma, never below zero.
    pub fn upper(&self, k: f64) -> f64 {
        self.value.max(0.0) + k * self.sigma
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdleRateEstimate {
    pub eps_b: Estimate,
    pub eps_d_plus_leak0: Estimate,
    pub eps_d_plus_leak1: Estimate,
    /// Inverse-variance combination of the two bit-flip estimators.
    pub p_flip: Estimate,
    /// Bit flips from `c − a`.
    pub p_flip_ac: Estimate,
    /// Bit flips from `b − d`.
    pub p_flip_bd: Estimate,
    /// The two bit-flip estimators differ by more than three sigma.
    pub flip_inconsistent: bool,
}

impl IdleRateEstimate {
    /// Point estimates, clipped at zero.
    pub fn rates(&self) -> IdleRates {
        IdleRates {
            eps_b: self.eps_b.value.max(0.0),
            eps_d_plus_leak0: self.eps_d_plus_leak0.value.max(0.0),
            eps_d_plus_leak1: self.eps_d_plus_leak1.value.max(0.0),
            p_flip: self.p_flip.value.max(0.0),
        }
    }
}

/// Initial slope of the error probability against delay: the linear
/// coefficient of a weighted least-squares quadratic `p = a + b t + c t²`.
/// The quadratic term absorbs the products of rates that bend the curves at
/// long delays. Weights are binomial, with the variance floored at one count
/// so that error-free points keep finite weight.
fn wls_slope(points: &[(f64, u64, u64)]) -> Result<Estimate> {
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for &(t, k, n) in points {
        if n == 0 {
            continue;
        }
        let n = n as f64;
        let p = k as f64 / n;
        let w = n / (p * (1.0 - p)).max(1.0 / n);
        let x = Vector3::new(1.0, t, t * t);
        normal += w * x * x.transpose();
        rhs += w * p * x;
    }
    let cov = normal
        .try_inverse()
        .filter(|c| c[(1, 1)] > 0.0 && c.iter().all(|v| v.is_finite()))
        .ok_or_else(|| {
            Error::Unidentifiable("each scheme needs at least three distinct delays".into())
        })?;
    let coef = cov * rhs;
    Ok(Estimate {
        value: coef[1],
        sigma: cov[(1, 1)].sqrt(),
    })
}

/// Linear combination of independent slope estimates.
fn combine(terms: &[(f64, Estimate)]) -> Estimate {
    Estimate {
        value: terms.iter().map(|(c, e)| c * e.value).sum(),
        sigma: terms
            .iter()
            .map(|(c, e)| (c * e.sigma).powi(2))
            .sum::<f64>()
            .sqrt(),
    }
}

fn inverse_variance_weights(a: &Estimate, b: &Estimate) -> (f64, f64) {
    if a.sigma == 0.0 || b.sigma == 0.0 {
        return (0.5, 0.5);
    }
    let wa = a.sigma.powi(-2);
    let wb = b.sigma.powi(-2);
    (wa / (wa + wb), wb / (wa + wb))
}

/// Estimates idle rates from measurements covering all four schemes and both
/// preparations.
pub fn estimate_idle_rates(data: &[IdleMeasurement]) -> Result<IdleRateEstimate> {
    let mut groups: [[Vec<(f64, u64, u64)>; 2]; 4] = Default::default();
    for m in data {
        if m.prepared > 1 {
            return Err(invalid("prepared state must be 0 or 1"));
        }
        if !(m.delay >= 0.0) || m.errors > m.shots {
            return Err(invalid("measurements need non-negative delay and errors ≤ shots"));
        }
        groups[m.scheme.index()][m.prepared as usize].push((m.delay, m.errors, m.shots));
    }
    let mut slope = [[Estimate { value: 0.0, sigma: 0.0 }; 2]; 4];
    for (s, scheme) in Scheme::ALL.iter().enumerate() {
        for prep in 0..2 {
            slope[s][prep] = wls_slope(&groups[s][prep]).map_err(|_| {
                Error::Unidentifiable(format!(
                    "scheme {scheme:?} after preparing |{prep}⟩ needs three distinct delays"
                ))
            })?;
        }
    }
    let [a, b, c, d] = slope;

    // Every derived quantity is a linear combination of the eight
    // independent slopes, indexed scheme * 2 + prep.
    let all = |coef: [f64; 8]| -> Estimate {
        let base = [a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]];
        let terms: Vec<(f64, Estimate)> = coef.iter().copied().zip(base).collect();
        combine(&terms)
    };
    let (wa0, wa1) = inverse_variance_weights(&a[0], &a[1]);
    let eps_b = all([wa0, wa1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let ac = [-0.5, -0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0];
    let bd = [0.0, 0.0, 0.5, 0.5, 0.0, 0.0, -0.5, -0.5];
    let p_flip_ac = all(ac);
    let p_flip_bd = all(bd);
    let (w1, w2) = inverse_variance_weights(&p_flip_ac, &p_flip_bd);
    let flip_coef: [f64; 8] = std::array::from_fn(|i| w1 * ac[i] + w2 * bd[i]);
    let p_flip = all(flip_coef);
    let leak = |prep: usize| {
        let mut coef = flip_coef.map(|c| -c);
        coef[2 + prep] += 1.0;
        all(coef)
    };
    let diff = all(std::array::from_fn(|i| ac[i] - bd[i]));
    Ok(IdleRateEstimate {
        eps_b,
        eps_d_plus_leak0: leak(0),
        eps_d_plus_leak1: leak(1),
        p_flip,
        p_flip_ac,
        p_flip_bd,
        flip_inconsistent: diff.value.abs() > 3.0 * diff.sigma,
    })
}

/// Samples four-scheme measurements from the idle channel with `rates`.
pub fn synthesize_idle_measurements(
    rates: &IdleRates,
    delays: &[f64],
    shots: u64,
    seed: u64,
) -> Result<Vec<IdleMeasurement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(delays.len() * 8);
    for scheme in Scheme::ALL {
        for prepared in 0..2u8 {
            for &delay in delays {
                let p = readout_error_probability(rates, delay, prepared, 1.0, scheme.shelve())?;
                let errors = Binomial::new(shots, p.clamp(0.0, 1.0))
                    .map_err(|e| invalid(e.to_string()))?
                    .sample(&mut rng);
                out.push(IdleMeasurement {
                    scheme,
                    prepared,
                    delay,
                    errors,
                    shots,
                });
            }
        }
    }
    Ok(out)
}
