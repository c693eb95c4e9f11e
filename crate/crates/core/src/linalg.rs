// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-level states, SU(2) propagators and their Bloch-sphere (SO(3)) images.
//!
//! Hamiltonians are written in the frame rotating with the drive,
//! `H = (Ω/2)(cos φ σx + sin φ σy) + (δ/2) σz`, with `σz|0⟩ = +|0⟩`.
//! Here `δ = ω_drive − ω_qubit` so that a positive detuning means the drive
//! sits above the qubit resonance.

use std::ops::Mul;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Normalised two-level state vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub amplitudes: [C64; 2],
}

impl QubitState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amplitudes: [C64; 2]) -> Result<Self> {
        let state = Self { amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    pub fn basis(bit: u8) -> Self {
        match bit {
            0 => Self {
                amplitudes: [ONE, ZERO],
            },
            _ => Self {
                amplitudes: [ZERO, ONE],
            },
        }
    }

    pub fn norm(&self) -> f64 {
        (self.amplitudes[0].norm_sqr() + self.amplitudes[1].norm_sqr()).sqrt()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    /// Probability of finding basis state `bit`.
    pub fn probability(&self, bit: u8) -> f64 {
        self.amplitudes[(bit & 1) as usize].norm_sqr()
    }

    pub fn overlap(&self, other: &QubitState) -> C64 {
        self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1]
    }

    /// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn bloch(&self) -> [f64; 3] {
        let [a, b] = self.amplitudes;
        let ab = a.conj() * b;
        [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()]
    }

    /// The six cardinal states of the Bloch sphere: ±z, ±x, ±y.
    pub fn cardinal() -> [QubitState; 6] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |a: C64, b: C64| QubitState { amplitudes: [a, b] };
        [
            c(ONE, ZERO),
            c(ZERO, ONE),
            c(C64::new(s, 0.0), C64::new(s, 0.0)),
            c(C64::new(s, 0.0), C64::new(-s, 0.0)),
            c(C64::new(s, 0.0), C64::new(0.0, s)),
            c(C64::new(s, 0.0), C64::new(0.0, -s)),
        ]
    }
}

/// A 2×2 propagator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryOp {
    pub matrix: [[C64; 2]; 2],
}

impl Default for UnitaryOp {
    fn default() -> Self {
        Self::identity()
    }
}

impl UnitaryOp {
    pub const fn identity() -> Self {
        Self {
            matrix: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// Propagator of `H = (Ω/2)(cos φ σx + sin φ σy) + (δ/2) σz` held for `dt`.
    pub fn from_segment(rabi: f64, phase: f64, delta: f64, dt: f64) -> Self {
        let nx = rabi * phase.cos();
        let ny = rabi * phase.sin();
        let nz = delta;
        let w = (nx * nx + ny * ny + nz * nz).sqrt();
        if w * dt == 0.0 {
            return Self::identity();
        }
        let half = 0.5 * w * dt;
        let (s, c) = half.sin_cos();
        let (nx, ny, nz) = (nx / w, ny / w, nz / w);
        // cos(θ/2) I − i sin(θ/2) n·σ
        Self {
            matrix: [
                [C64::new(c, -s * nz), C64::new(-s * ny, -s * nx)],
                [C64::new(s * ny, -s * nx), C64::new(c, s * nz)],
            ],
        }
    }

    /// Rotation by `angle` about the equatorial axis at azimuth `phase`.
    pub fn rotation(angle: f64, phase: f64) -> Self {
        Self::from_segment(angle, phase, 0.0, 1.0)
    }

    /// Rotation by `angle` about the z axis, `exp(−i angle σz / 2)`.
    pub fn z_rotation(angle: f64) -> Self {
        Self::from_segment(0.0, 0.0, angle, 1.0)
    }

    pub fn dagger(&self) -> Self {
        let m = &self.matrix;
        Self {
            matrix: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    pub fn apply(&self, state: &QubitState) -> QubitState {
        let m = &self.matrix;
        let [a, b] = state.amplitudes;
        QubitState {
            amplitudes: [m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b],
        }
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.dagger() * *self;
        let id = Self::identity();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.matrix[i][j] - id.matrix[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Same operator with the global phase fixed so that the first non-zero
    /// entry (row-major) is real and positive.
    pub fn canonical(&self) -> Self {
        let flat = [
            self.matrix[0][0],
            self.matrix[0][1],
            self.matrix[1][0],
            self.matrix[1][1],
        ];
        let pivot = flat
            .iter()
            .copied()
            .find(|z| z.norm() > 1e-9)
            .unwrap_or(ONE);
        let phase = pivot.conj() / pivot.norm();
        let mut out = *self;
        for row in out.matrix.iter_mut() {
            for z in row.iter_mut() {
                *z *= phase;
            }
        }
        out
    }

    /// `|tr(A†B)| / 2`; equals 1 exactly when the operators agree up to phase.
    pub fn phase_insensitive_overlap(&self, other: &UnitaryOp) -> f64 {
        (self.dagger() * *other).trace().norm() / 2.0
    }

    pub fn eq_up_to_phase(&self, other: &UnitaryOp, tol: f64) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.matrix
            .iter()
            .flatten()
            .zip(b.matrix.iter().flatten())
            .all(|(x, y)| (x - y).norm() <= tol)
    }

    /// Average gate infidelity against `ideal`, `(2/3)(1 − |tr(U†V)/2|²)`.
    pub fn average_infidelity(&self, ideal: &UnitaryOp) -> f64 {
        let f = self.phase_insensitive_overlap(ideal);
        (2.0 / 3.0) * (1.0 - f * f).max(0.0)
    }

    /// Fast integer power by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = base * acc;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Rotation matrix acting on Bloch vectors, `R_ij = tr(σ_i U σ_j U†)/2`.
    pub fn to_so3(&self) -> So3 {
        let m = &self.matrix;
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        // Columns are the images of σx, σy, σz under U · U†.
        let img = |p: [[C64; 2]; 2]| -> [f64; 3] {
            // U p U†
            let up = [
                [a * p[0][0] + b * p[1][0], a * p[0][1] + b * p[1][1]],
                [c * p[0][0] + d * p[1][0], c * p[0][1] + d * p[1][1]],
            ];
            let q = [
                [
                    up[0][0] * a.conj() + up[0][1] * b.conj(),
                    up[0][0] * c.conj() + up[0][1] * d.conj(),
                ],
                [
                    up[1][0] * a.conj() + up[1][1] * b.conj(),
                    up[1][0] * c.conj() + up[1][1] * d.conj(),
                ],
            ];
            [q[1][0].re, q[1][0].im, q[0][0].re]
        };
        let i = C64::new(0.0, 1.0);
        let cx = img([[ZERO, ONE], [ONE, ZERO]]);
        let cy = img([[ZERO, -i], [i, ZERO]]);
        let cz = img([[ONE, ZERO], [ZERO, -ONE]]);
        So3([
            [cx[0], cy[0], cz[0]],
            [cx[1], cy[1], cz[1]],
            [cx[2], cy[2], cz[2]],
        ])
    }
}

impl Mul for UnitaryOp {
    type Output = UnitaryOp;

    fn mul(self, rhs: UnitaryOp) -> UnitaryOp {
        let a = &self.matrix;
        let b = &rhs.matrix;
        UnitaryOp {
            matrix: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

/// Real 3×3 matrix acting on Bloch vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So3(pub [[f64; 3]; 3]);

impl So3 {
    pub const IDENTITY: So3 = So3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn transpose(&self) -> So3 {
        let m = &self.0;
        So3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }
}

impl Mul for So3 {
    type Output = So3;

    fn mul(self, rhs: So3) -> So3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        So3(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn x90_on_ground_state() {
        let out = UnitaryOp::rotation(FRAC_PI_2, 0.0).apply(&QubitState::basis(0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes[0] - C64::new(s, 0.0)).norm() < 1e-12);
        assert!((out.amplitudes[1] - C64::new(0.0, -s)).norm() < 1e-12);
    }

    #[test]
    fn segment_is_unitary() {
        let u = UnitaryOp::from_segment(1.3, 0.4, -0.7, 2.1);
        assert!(u.is_unitary(1e-13));
    }

    #[test]
    fn canonical_fixes_phase() {
        let u = UnitaryOp::rotation(PI / 3.0, 0.2);
        let mut v = u;
        let g = C64::from_polar(1.0, 1.1);
        for z in v.matrix.iter_mut().flatten() {
            *z *= g;
        }
        assert!(u.eq_up_to_phase(&v, 1e-12));
        assert!(!u.eq_up_to_phase(&UnitaryOp::identity(), 1e-6));
    }

    #[test]
    fn so3_maps_bloch_vectors() {
        let u = UnitaryOp::from_segment(0.9, 1.2, 0.3, 1.7);
        let psi = QubitState::cardinal()[4];
        let lhs = u.apply(&psi).bloch();
        let rhs = u.to_so3().apply(psi.bloch());
        for k in 0..3 {
            assert!((lhs[k] - rhs[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let u = UnitaryOp::from_segment(0.9, 1.2, 0.3, 0.1);
        let mut acc = UnitaryOp::identity();
        for _ in 0..37 {
            acc = u * acc;
        }
        assert!(acc.eq_up_to_phase(&u.pow(37), 1e-12));
    }

    #[test]
    fn rotation_infidelity_small_angle() {
        let e = 1e-3;
        let u = UnitaryOp::rotation(e, 0.0);
        let r = u.average_infidelity(&UnitaryOp::identity());
        assert!((r - e * e / 6.0).abs() < 1e-12);
    }
}
