// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Walsh-patterned pulse trains for amplitude drift spectroscopy.
//!
//! A train of `N` groups of four π/2 pulses is split into `2^M` equal blocks
//! and block `m` is driven with sign `W(m) = (−1)^popcount(m)`. With this sign
//! pattern the block sums of `(m+1)^(k+1) − m^(k+1)` vanish for every `k < M`,
//! so the train is blind to amplitude polynomials below order `M`.

use std::f64::consts::{PI, TAU};

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::noise::rng::{purpose, StreamKey};
use crate::optim::golden_max;
use crate::pulse::PulseLabel;

use super::target::PulseTrain;

/// Walsh orders supported by [`walsh_function`].
pub const WALSH_ORDERS: [u32; 5] = [0, 1, 3, 7, 15];

/// `M` for order `2^M − 1`.
pub fn walsh_m(order: u32) -> Result<u32> {
    let m = (order + 1).trailing_zeros();
    if (order as u64 + 1) != 1u64 << m || m > 31 {
        return Err(invalid(format!(
            "Walsh order {order} is not of the form 2^M − 1"
        )));
    }
    Ok(m)
}

/// Sign of block `m` of an order-`order` train.
pub fn walsh_function(order: u32, m: u32) -> Result<i8> {
    let big_m = walsh_m(order)?;
    if m >> big_m != 0 {
        return Err(invalid(format!("block {m} out of range for order {order}")));
    }
    Ok(if m.count_ones().is_multiple_of(2) { 1 } else { -1 })
}

/// Integer block sum `Σ_m W(m)((m+1)^(k+1) − m^(k+1))`.
pub fn walsh_block_sum(order: u32, k: u32) -> Result<i128> {
    let big_m = walsh_m(order)?;
    let p = k + 1;
    let mut total: i128 = 0;
    for m in 0..(1u32 << big_m) {
        let w = walsh_function(order, m)? as i128;
        total += w * ((m as i128 + 1).pow(p) - (m as i128).pow(p));
    }
    Ok(total)
}

/// Coefficients `A_k = (1/(k+1)) (2πN/(Ω_q 2^M))^(k+1) Σ_m W(m)((m+1)^(k+1) − m^(k+1))`
/// for `k = 0..=k_max`, in units of `s^(k+1)`.
pub fn walsh_coefficients(order: u32, n_groups: u64, omega_q: f64, k_max: u32) -> Result<Vec<f64>> {
    let big_m = walsh_m(order)?;
    if !(omega_q > 0.0) {
        return Err(invalid("omega_q must be positive"));
    }
    let unit = TAU * n_groups as f64 / (omega_q * (1u64 << big_m) as f64);
    (0..=k_max)
        .map(|k| Ok(unit.powi(k as i32 + 1) / (k + 1) as f64 * walsh_block_sum(order, k)? as f64))
        .collect()
}

/// Pulse train for `n_groups` groups of four pulses under the order's pattern.
pub fn walsh_train(order: u32, n_groups: u64) -> Result<PulseTrain> {
    let big_m = walsh_m(order)?;
    let blocks = 1u64 << big_m;
    if n_groups == 0 || !n_groups.is_multiple_of(blocks) {
        return Err(invalid(format!(
            "{n_groups} groups do not split into {blocks} blocks"
        )));
    }
    let per_block = 4 * n_groups / blocks;
    (0..blocks as u32)
        .map(|m| {
            let label = if walsh_function(order, m)? > 0 {
                PulseLabel::PlusX
            } else {
                PulseLabel::MinusX
            };
            Ok((label, per_block))
        })
        .collect()
}

/// Closed-form `P(|0⟩)` for Gaussian coefficients with absolute means `mu[k]`
/// and deviations `sigma[k]` (rad/s per s^k).
pub fn walsh_survival(a: &[f64], mu: &[f64], sigma: &[f64]) -> f64 {
    let prod: f64 = a
        .iter()
        .enumerate()
        .map(|(k, &ak)| {
            let m = mu.get(k).copied().unwrap_or(0.0);
            let s = sigma.get(k).copied().unwrap_or(0.0);
            (ak * m).cos() * (-0.5 * (ak * s).powi(2)).exp()
        })
        .product();
    0.5 + 0.5 * prod
}

/// Samples a run of `order` from the closed-form survival, with coefficient
/// means `rel_mu[k]` and deviations `rel_sigma[k]` relative to `omega_q`.
pub fn synthesize_walsh_run(
    order: u32,
    lengths: &[u64],
    omega_q: f64,
    rel_mu: &[f64],
    rel_sigma: &[f64],
    shots: u64,
    key: StreamKey,
) -> Result<WalshRun> {
    let k_max = rel_mu.len().max(rel_sigma.len()).max(1) as u32 - 1;
    let mu: Vec<f64> = rel_mu.iter().map(|m| m * omega_q).collect();
    let sigma: Vec<f64> = rel_sigma.iter().map(|s| s * omega_q).collect();
    let mut rng = key.rng(purpose::CALIBRATION);
    let points = lengths
        .iter()
        .map(|&n| {
            let a = walsh_coefficients(order, n, omega_q, k_max)?;
            let p = walsh_survival(&a, &mu, &sigma).clamp(0.0, 1.0);
            let zeros = Binomial::new(shots, p)
                .map_err(|e| invalid(e.to_string()))?
                .sample(&mut rng);
            Ok((n, zeros, shots))
        })
        .collect::<Result<_>>()?;
    Ok(WalshRun { order, points })
}

/// Measured points of one Walsh order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalshRun {
    pub order: u32,
    /// `(N, zeros, shots)` per train length.
    pub points: Vec<(u64, u64, u64)>,
}

/// Fitted coefficient of one polynomial order, relative to Ω_q (units s^-k).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalshEstimate {
    pub k: u32,
    pub value: f64,
    /// Largest value within the 95% likelihood interval.
    pub upper_bound: f64,
    /// False when zero lies inside the interval.
    pub identifiable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalshFit {
    /// Relative shot-to-shot deviation of the constant term.
    pub sigma0: f64,
    /// Estimates of |μ_k| relative to Ω_q, one per run, `k = M`.
    pub mu: Vec<WalshEstimate>,
}

const HALF_CHI2_95: f64 = 1.92;

fn binomial_ll(points: &[(u64, u64, u64)], p_of: impl Fn(u64) -> f64) -> f64 {
    points
        .iter()
        .map(|&(n, zeros, shots)| {
            let p = p_of(n).clamp(1e-12, 1.0 - 1e-12);
            zeros as f64 * p.ln() + (shots - zeros) as f64 * (1.0 - p).ln()
        })
        .sum()
}

/// Maximises over `x ≥ 0` on a uniform grid of `[0, hi]` then refines.
fn scan_max(f: &dyn Fn(f64) -> f64, hi: f64, steps: usize) -> (f64, f64) {
    let h = hi / steps as f64;
    let (mut bx, mut bv) = (0.0, f(0.0));
    for i in 1..=steps {
        let v = f(i as f64 * h);
        if v > bv {
            bv = v;
            bx = i as f64 * h;
        }
    }
    let (x, v) = golden_max(f, (bx - h).max(0.0), bx + h, h * 1e-9, 200);
    if v > bv {
        (x, v)
    } else {
        (bx, bv)
    }
}

/// Upper end of the likelihood interval, searched upward from `best`.
fn upper_limit(f: &dyn Fn(f64) -> f64, best: f64, peak: f64, hi: f64) -> f64 {
    let cut = peak - HALF_CHI2_95;
    let steps = 2000;
    let h = (hi - best).max(0.0) / steps as f64;
    let mut x = best;
    for _ in 0..steps {
        if f(x + h) < cut {
            let (mut lo, mut up) = (x, x + h);
            for _ in 0..60 {
                let mid = 0.5 * (lo + up);
                if f(mid) >= cut {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            return lo;
        }
        x += h;
    }
    hi
}

/// How the order-0 run is split between a mean offset and shot-to-shot spread.
/// To second order in `N` the two give the same decay, so a joint fit trades
/// one against the other on short trains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma0Policy {
    /// `μ0 = 0`, as right after an amplitude calibration.
    #[default]
    ZeroMean,
    /// `μ0` and `σ0` fitted together.
    Joint,
}

/// Hierarchical fit: the order-0 run gives `|μ0|` and `σ0`; each run of order
/// `2^M − 1` gives `|μ_M|` with `σ_k = 0` for `k ≥ 1` and higher terms ignored.
pub fn walsh_fit(runs: &[WalshRun], omega_q: f64, policy: Sigma0Policy) -> Result<WalshFit> {
    let order0 = runs
        .iter()
        .find(|r| r.order == 0)
        .ok_or_else(|| invalid("walsh_fit needs an order-0 run"))?;
    let max_n = |r: &WalshRun| r.points.iter().map(|p| p.0).max().unwrap_or(0);
    if order0.points.is_empty() {
        return Err(invalid("order-0 run has no points"));
    }
    // Order 0: A_0 = 2πN/Ω_q, so the phase per unit relative offset is 2πN.
    let ll0 = |mu: f64, sigma: f64| {
        binomial_ll(&order0.points, |n| {
            let a = TAU * n as f64;
            0.5 + 0.5 * (a * mu).cos() * (-0.5 * (a * sigma).powi(2)).exp()
        })
    };
    let scale0 = PI / (TAU * max_n(order0) as f64);
    let h = 4.0 * scale0 / 80.0;
    let (mut mu0, mut sigma0, mut best) = (0.0, 0.0, ll0(0.0, 0.0));
    match policy {
        Sigma0Policy::ZeroMean => {
            let (s, v) = scan_max(&|s| ll0(0.0, s), 4.0 * scale0, 400);
            sigma0 = s;
            best = v;
        }
        Sigma0Policy::Joint => {
            let grid = 80;
            for i in 0..=grid {
                for j in 0..=grid {
                    let (m, s) = (h * i as f64, h * j as f64);
                    let v = ll0(m, s);
                    if v > best {
                        best = v;
                        mu0 = m;
                        sigma0 = s;
                    }
                }
            }
            for _ in 0..20 {
                let (s, _) = golden_max(
                    |s| ll0(mu0, s),
                    (sigma0 - h).max(0.0),
                    sigma0 + h,
                    h * 1e-9,
                    200,
                );
                sigma0 = s;
                let (m, v) = golden_max(
                    |m| ll0(m, sigma0),
                    (mu0 - h).max(0.0),
                    mu0 + h,
                    h * 1e-9,
                    200,
                );
                mu0 = m;
                best = v;
            }
        }
    }
    let f0 = |m: f64| ll0(m, sigma0);
    let mut mu = vec![WalshEstimate {
        k: 0,
        value: mu0,
        upper_bound: upper_limit(&f0, mu0, best, 8.0 * scale0),
        identifiable: f0(0.0) < best - HALF_CHI2_95,
    }];

    for run in runs.iter().filter(|r| r.order != 0) {
        let k = walsh_m(run.order)?;
        if run.points.is_empty() {
            return Err(invalid(format!("order-{} run has no points", run.order)));
        }
        // Relative coefficient c_k enters as Ω_q c_k A_k.
        let phase = |n: u64| -> Result<f64> {
            Ok(omega_q * walsh_coefficients(run.order, n, omega_q, k)?[k as usize])
        };
        let per_n: Vec<(u64, f64)> = run
            .points
            .iter()
            .map(|p| Ok((p.0, phase(p.0)?)))
            .collect::<Result<_>>()?;
        let lookup = |n: u64| per_n.iter().find(|q| q.0 == n).map_or(0.0, |q| q.1);
        let ll = |c: f64| binomial_ll(&run.points, |n| 0.5 + 0.5 * (lookup(n) * c).cos());
        let max_phase = per_n.iter().map(|q| q.1.abs()).fold(0.0, f64::max);
        if max_phase == 0.0 {
            return Err(invalid("Walsh run has no sensitivity"));
        }
        let hi = 2.0 * PI / max_phase;
        let (value, peak) = scan_max(&ll, hi, 4000);
        mu.push(WalshEstimate {
            k,
            value,
            upper_bound: upper_limit(&ll, value, peak, hi),
            identifiable: ll(0.0) < peak - HALF_CHI2_95,
        });
    }
    Ok(WalshFit { sigma0, mu })
}
