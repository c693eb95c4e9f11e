// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! Keyed random streams. Every draw is a pure function of
//! `(seed, sequence, shot, pulse)`, independent of execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a list of words into one 64-bit key.
pub fn mix(words: &[u64]) -> u64 {
    words.iter().fold(0x6A09_E667_F3BC_C909, |acc, &w| {
        splitmix64(acc ^ splitmix64(w))
    })
}

/// Identifies one independent random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub sequence: u64,
    pub shot: u64,
    pub pulse: u64,
}

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            sequence: 0,
            shot: 0,
            pulse: 0,
        }
    }

    pub fn sequence(self, sequence: u64) -> Self {
        Self { sequence, ..self }
    }

    pub fn shot(self, shot: u64) -> Self {
        Self { shot, ..self }
    }

    pub fn pulse(self, pulse: u64) -> Self {
        Self { pulse, ..self }
    }

    /// Stream for a named purpose, so different channels never share draws.
    pub fn rng(&self, purpose: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix(&[
            self.seed,
            self.sequence,
            self.shot,
            self.pulse,
            purpose,
        ]))
    }
}

/// Purpose tags separating the channels that draw from one key.
pub mod purpose {
    pub const PLAN: u64 = 1;
    pub const AMPLITUDE: u64 = 2;
    pub const MOTION: u64 = 3;
    pub const DEPHASING: u64 = 4;
    pub const OUTCOME: u64 = 5;
    pub const BOOTSTRAP: u64 = 6;
    pub const CALIBRATION: u64 = 7;
    pub const TRAJECTORY: u64 = 8;
    pub const DETUNING: u64 = 9;
}
