// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Dephasing filter functions of piecewise-constant control.
//!
//! With noise `½δ(t)σz` the toggling-frame error direction is
//! `y(t) = U_c†(t) σz U_c(t)`. The filter function is
//! `G(ω) = (ω²/4) Σ_⊥ |∫ y_j(t) e^{iωt} dt|²`, summed over the two axes
//! perpendicular to the initial state, so that `χ = (1/π)∫ S_φ G dω` and
//! the sequence fidelity is `½(1 + e^{−χ})`.

use num_complex::Complex64 as C64;

use crate::linalg::So3;

use super::timeline::ControlTimeline;

#[derive(Clone, Copy, Debug)]
struct Kind {
    duration: f64,
    rabi: f64,
}

/// Per-segment data: start time, kind, and the perpendicular components of
/// the `cos Ωs` and `sin Ωs` parts of `y`.
#[derive(Clone, Copy, Debug)]
struct Piece {
    start: f64,
    kind: usize,
    p: [f64; 2],
    q: [f64; 2],
}

/// Precomputed toggling-frame trajectory of a timeline.
#[derive(Clone, Debug)]
pub struct FilterKernel {
    kinds: Vec<Kind>,
    pieces: Vec<Piece>,
    duration: f64,
}

fn transpose_apply(m: &So3, v: [f64; 3]) -> [f64; 3] {
    m.transpose().apply(v)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Two unit vectors completing `axis` to an orthonormal basis.
fn perpendicular_basis(axis: [f64; 3]) -> [[f64; 3]; 2] {
    let helper = if axis[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let d = dot(helper, axis);
    let mut e1 = [
        helper[0] - d * axis[0],
        helper[1] - d * axis[1],
        helper[2] - d * axis[2],
    ];
    let n = dot(e1, e1).sqrt();
    e1 = e1.map(|x| x / n);
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    [e1, e2]
}

/// `∫_0^T e^{ias} ds`, stable as `a → 0`.
fn phase_integral(a: f64, t: f64) -> C64 {
    let x = 0.5 * a * t;
    let sinc = if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    C64::from_polar(t * sinc, x)
}

impl FilterKernel {
    pub fn new(timeline: &ControlTimeline) -> Self {
        let basis = perpendicular_basis(timeline.initial_axis());
        let mut kinds: Vec<Kind> = Vec::new();
        let mut pieces = Vec::with_capacity(timeline.segments().len());
        let mut m = So3::IDENTITY;
        let mut start = 0.0;
        for seg in timeline.segments() {
            let kind = match kinds.iter().position(|k| {
                k.duration.to_bits() == seg.duration.to_bits()
                    && k.rabi.to_bits() == seg.rabi.to_bits()
            }) {
                Some(i) => i,
                None => {
                    kinds.push(Kind {
                        duration: seg.duration,
                        rabi: seg.rabi,
                    });
                    kinds.len() - 1
                }
            };
            // Within the segment y(s) = Mᵀ(ẑ cos Ωs − (n×ẑ) sin Ωs).
            let (s, c) = seg.phase.sin_cos();
            let p = transpose_apply(&m, [0.0, 0.0, 1.0]);
            let q = transpose_apply(&m, [-s, c, 0.0]);
            pieces.push(Piece {
                start,
                kind,
                p: [dot(p, basis[0]), dot(p, basis[1])],
                q: [dot(q, basis[0]), dot(q, basis[1])],
            });
            m = seg.so3() * m;
            start += seg.duration;
        }
        Self {
            kinds,
            pieces,
            duration: start,
        }
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// `G(ω)`.
    pub fn g(&self, omega: f64) -> f64 {
        // Per-kind integrals of e^{iωs}cos Ωs and e^{iωs}sin Ωs.
        let tables: Vec<(C64, C64)> = self
            .kinds
            .iter()
            .map(|k| {
                let plus = phase_integral(omega + k.rabi, k.duration);
                let minus = phase_integral(omega - k.rabi, k.duration);
                if k.rabi == 0.0 {
                    (plus, C64::new(0.0, 0.0))
                } else {
                    (0.5 * (plus + minus), (plus - minus) / C64::new(0.0, 2.0))
                }
            })
            .collect();
        let mut y = [C64::new(0.0, 0.0); 2];
        for piece in &self.pieces {
            let (ci, si) = tables[piece.kind];
            let rot = C64::from_polar(1.0, omega * piece.start);
            for (e, ye) in y.iter_mut().enumerate() {
                *ye += rot * (ci * piece.p[e] + si * piece.q[e]);
            }
        }
        0.25 * omega * omega * (y[0].norm_sqr() + y[1].norm_sqr())
    }

    /// `∫ |y_⊥(t)|² dt`, the exact overlap weight of white frequency noise.
    pub fn white_weight(&self) -> f64 {
        self.pieces
            .iter()
            .map(|piece| {
                let k = self.kinds[piece.kind];
                let t = k.duration;
                let (icc, iss, ics) = if k.rabi == 0.0 {
                    (t, 0.0, 0.0)
                } else {
                    let w = k.rabi;
                    let s2 = (2.0 * w * t).sin() / (4.0 * w);
                    (
                        0.5 * t + s2,
                        0.5 * t - s2,
                        (w * t).sin().powi(2) / (2.0 * w),
                    )
                };
                (0..2)
                    .map(|e| {
                        let (p, q) = (piece.p[e], piece.q[e]);
                        p * p * icc + q * q * iss + 2.0 * p * q * ics
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    /// `∫ y_⊥(t) dt`: the rotation vector a static detuning of 1 rad/s leaves.
    pub fn static_vector(&self) -> [f64; 2] {
        let mut out = [0.0; 2];
        for piece in &self.pieces {
            let k = self.kinds[piece.kind];
            let (ic, is) = if k.rabi == 0.0 {
                (k.duration, 0.0)
            } else {
                let x = k.rabi * k.duration;
                (x.sin() / k.rabi, (1.0 - x.cos()) / k.rabi)
            };
            for (e, o) in out.iter_mut().enumerate() {
                *o += piece.p[e] * ic + piece.q[e] * is;
            }
        }
        out
    }
}

/// `G(ω)` of `timeline` at each of `omegas`.
pub fn filter_function(timeline: &ControlTimeline, omegas: &[f64]) -> Vec<f64> {
    let kernel = FilterKernel::new(timeline);
    omegas.iter().map(|&w| kernel.g(w)).collect()
}

/// Closed-form Ramsey filter `sin²(ωτ/2)`.
pub fn ramsey_filter(omega: f64, tau: f64) -> f64 {
    (0.5 * omega * tau).sin().powi(2)
}

/// Closed-form Hahn-echo filter for an instantaneous π pulse, `4 sin⁴(ωτ/4)`.
pub fn spin_echo_filter(omega: f64, tau: f64) -> f64 {
    4.0 * (0.25 * omega * tau).sin().powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffunc::timeline::Segment;

    #[test]
    fn segment_start_matches_accumulated_rotation() {
        // The y vector at the end of a segment must equal the start of the next.
        let segs = vec![
            Segment::rotation(1.1, 0.3, 2.0),
            Segment::rotation(0.7, 2.0, 1.0),
            Segment::free(0.5),
        ];
        let tl = ControlTimeline::new(segs.clone(), [0.0, 0.0, 1.0]).unwrap();
        let k = FilterKernel::new(&tl);
        for i in 0..2 {
            let a = k.pieces[i];
            let kind = k.kinds[a.kind];
            let th = kind.rabi * kind.duration;
            let b = k.pieces[i + 1];
            for e in 0..2 {
                let end = a.p[e] * th.cos() + a.q[e] * th.sin();
                assert!((end - b.p[e]).abs() < 1e-12, "{i} {e}: {end} {}", b.p[e]);
            }
        }
    }
}
