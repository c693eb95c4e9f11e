// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

/// Survival probability `A(1−2ε)^l + ½`, clamped to `[0, 1]`.
pub fn survival_model(length: u64, amplitude: f64, epsilon: f64) -> f64 {
    (amplitude * decay(length, epsilon) + 0.5).clamp(0.0, 1.0)
}

/// `(1−2ε)^l`, exact at the edges.
pub fn decay(length: u64, epsilon: f64) -> f64 {
    if length == 0 {
        return 1.0;
    }
    let base = 1.0 - 2.0 * epsilon;
    if base <= 0.0 {
        return 0.0;
    }
    (length as f64 * base.ln()).exp()
}

/// `x ln y` with the convention `0 ln 0 = 0`.
pub(crate) fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}
