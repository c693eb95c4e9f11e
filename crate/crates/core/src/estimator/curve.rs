// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{invalid, Result};
use crate::optim::golden_max;

use super::model::decay;

/// Least-squares fit of `A(1−2ε)^l + ½` to noiseless predicted survivals.
/// Returns `(A, ε)`.
pub fn fit_survival_curve(points: &[(u64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(invalid("curve fit needs at least two points"));
    }
    let best_a = |eps: f64| -> (f64, f64) {
        let (num, den) = points.iter().fold((0.0, 0.0), |(n, d), &(l, p)| {
            let r = decay(l, eps);
            (n + r * (p - 0.5), d + r * r)
        });
        let a = if den > 0.0 { num / den } else { 0.0 };
        let sse: f64 = points
            .iter()
            .map(|&(l, p)| (p - 0.5 - a * decay(l, eps)).powi(2))
            .sum();
        (a, sse)
    };
    let l_max = points.iter().map(|p| p.0).max().unwrap_or(1).max(1) as f64;
    // Search ε on a log scale spanning well below one error per sequence.
    let lo = (1e-8 / l_max).ln();
    let hi = 0.49f64.ln();
    let n = 400;
    let (mut best_x, mut best_v) = (lo, f64::NEG_INFINITY);
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let v = -best_a(x.exp()).1;
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }
    let step = (hi - lo) / n as f64;
    let (x, v) = golden_max(
        |x| -best_a(x.exp()).1,
        best_x - step,
        best_x + step,
        1e-12,
        300,
    );
    let zero = -best_a(0.0).1;
    let eps = if zero >= v { 0.0 } else { x.exp() };
    Ok((best_a(eps).0, eps))
}
