// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! The 24-element single-qubit Clifford group generated by ±π/2 rotations
//! about X and Y.
//!
//! Elements are discovered breadth-first from the identity, trying generators
//! in the order `+X90, −X90, +Y90, −Y90`. The first word that reaches an element
//! is therefore its shortest decomposition, with ties broken lexicographically,
//! and the element indices follow discovery order (identity is 0, `+X90` is 1).
//! Words are listed in time order: `[a, b]` applies `a` first.

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::UnitaryOp;
use crate::pulse::PulseLabel;

pub const GROUP_ORDER: usize = 24;

/// Index of a group element, `0..24`.
pub type CliffordIndex = u8;

pub const IDENTITY: CliffordIndex = 0;

const MATCH_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliffordElement {
    pub index: CliffordIndex,
    /// Canonical representative: first non-zero entry real and positive.
    pub rep: UnitaryOp,
    pub pulses: Vec<PulseLabel>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CliffordGroup {
    elements: Vec<CliffordElement>,
    /// `compose[a][b]` is the element obtained by applying `a` then `b`.
    compose: Vec<Vec<CliffordIndex>>,
    inverse: Vec<CliffordIndex>,
}

/// Product of a word in time order.
pub fn word_unitary(word: &[PulseLabel]) -> UnitaryOp {
    word.iter()
        .fold(UnitaryOp::identity(), |acc, p| p.unitary() * acc)
}

impl CliffordGroup {
    /// Builds the group table. Use [`CliffordGroup::shared`] for the cached copy.
    pub fn build() -> Self {
        let mut elements: Vec<CliffordElement> = vec![CliffordElement {
            index: IDENTITY,
            rep: UnitaryOp::identity(),
            pulses: Vec::new(),
        }];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in PulseLabel::ALL {
                let u = (g.unitary() * elements[i].rep).canonical();
                if elements.iter().any(|e| e.rep.eq_up_to_phase(&u, MATCH_TOL)) {
                    continue;
                }
                let mut pulses = elements[i].pulses.clone();
                pulses.push(g);
                let index = elements.len() as CliffordIndex;
                elements.push(CliffordElement {
                    index,
                    rep: u,
                    pulses,
                });
                queue.push_back(index as usize);
            }
        }
        assert_eq!(
            elements.len(),
            GROUP_ORDER,
            "generator set does not close on 24 elements"
        );

        let lookup = |u: &UnitaryOp| -> CliffordIndex {
            elements
                .iter()
                .find(|e| e.rep.eq_up_to_phase(u, MATCH_TOL))
                .map(|e| e.index)
                .expect("product left the group")
        };
        let compose: Vec<Vec<CliffordIndex>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| lookup(&(b.rep * a.rep))).collect())
            .collect();
        let inverse = (0..GROUP_ORDER)
            .map(|a| {
                (0..GROUP_ORDER)
                    .find(|&b| compose[a][b] == IDENTITY)
                    .expect("element without inverse") as CliffordIndex
            })
            .collect();
        Self {
            elements,
            compose,
            inverse,
        }
    }

    pub fn shared() -> &'static CliffordGroup {
        static GROUP: OnceLock<CliffordGroup> = OnceLock::new();
        GROUP.get_or_init(CliffordGroup::build)
    }

    pub fn elements(&self) -> &[CliffordElement] {
        &self.elements
    }

    pub fn element(&self, index: CliffordIndex) -> &CliffordElement {
        &self.elements[index as usize]
    }

    /// Apply `first`, then `then`.
    pub fn compose(&self, first: CliffordIndex, then: CliffordIndex) -> CliffordIndex {
        self.compose[first as usize][then as usize]
    }

    pub fn inverse(&self, index: CliffordIndex) -> CliffordIndex {
        self.inverse[index as usize]
    }

    pub fn decompose(&self, index: CliffordIndex) -> &[PulseLabel] {
        &self.elements[index as usize].pulses
    }

    /// Mean number of π/2 pulses per uniformly drawn Clifford.
    pub fn pulses_per_clifford(&self) -> f64 {
        let total: usize = self.elements.iter().map(|e| e.pulses.len()).sum();
        total as f64 / GROUP_ORDER as f64
    }

    /// Element that undoes the product of `cliffords`.
    pub fn recovery_gate(&self, cliffords: &[CliffordIndex]) -> Result<&CliffordElement> {
        if cliffords.is_empty() {
            return Err(invalid("recovery gate needs a non-empty sequence"));
        }
        if let Some(bad) = cliffords.iter().find(|&&c| c as usize >= GROUP_ORDER) {
            return Err(invalid(format!("Clifford index {bad} out of range")));
        }
        let net = cliffords
            .iter()
            .fold(IDENTITY, |acc, &c| self.compose(acc, c));
        Ok(self.element(self.inverse(net)))
    }

    /// Index of the element equal to `u` up to global phase, if any.
    pub fn find(&self, u: &UnitaryOp) -> Option<CliffordIndex> {
        self.elements
            .iter()
            .find(|e| e.rep.eq_up_to_phase(u, 1e-7))
            .map(|e| e.index)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Shortest generator word reproducing element `index`, found by exhaustive
/// iterative deepening over words in `{±X90, ±Y90}` (lexicographic within a
/// length). Independent of the breadth-first table construction.
pub fn min_pulse_decomposition(index: CliffordIndex) -> Result<Vec<PulseLabel>> {
    if index as usize >= GROUP_ORDER {
        return Err(invalid(format!("Clifford index {index} out of range")));
    }
    let target = CliffordGroup::shared().element(index).rep;
    for len in 0..=6u32 {
        let count = 4usize.pow(len);
        for code in 0..count {
            let word: Vec<PulseLabel> = (0..len)
                .map(|pos| {
                    let digit = (code / 4usize.pow(len - 1 - pos)) % 4;
                    PulseLabel::ALL[digit]
                })
                .collect();
            if word_unitary(&word).eq_up_to_phase(&target, MATCH_TOL) {
                return Ok(word);
            }
        }
    }
    Err(invalid("no decomposition found up to length 6"))
}

/// Which qubit state is transferred to the dark manifold before readout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShelveChoice {
    Expected,
    Other,
}

/// A randomised benchmarking sequence with its recovery gate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSequence {
    pub cliffords: Vec<CliffordIndex>,
    pub recovery: CliffordIndex,
    pub prepared_state: u8,
    pub shelve_choice: ShelveChoice,
}

impl GateSequence {
    pub fn new(
        cliffords: Vec<CliffordIndex>,
        prepared_state: u8,
        shelve_choice: ShelveChoice,
    ) -> Result<Self> {
        let recovery = CliffordGroup::shared().recovery_gate(&cliffords)?.index;
        Ok(Self {
            cliffords,
            recovery,
            prepared_state,
            shelve_choice,
        })
    }

    /// Clifford indices including the trailing recovery gate.
    pub fn all_gates(&self) -> impl Iterator<Item = CliffordIndex> + '_ {
        self.cliffords
            .iter()
            .copied()
            .chain(std::iter::once(self.recovery))
    }

    /// Number of Cliffords including the recovery gate.
    pub fn gate_count(&self) -> usize {
        self.cliffords.len() + 1
    }

    pub fn pulses(&self) -> impl Iterator<Item = PulseLabel> + '_ {
        let group = CliffordGroup::shared();
        self.all_gates()
            .flat_map(move |c| group.decompose(c).iter().copied())
    }

    pub fn pulse_count(&self) -> usize {
        let group = CliffordGroup::shared();
        self.all_gates().map(|c| group.decompose(c).len()).sum()
    }

    /// The bit that a perfect run returns.
    pub fn expected_state(&self) -> u8 {
        self.prepared_state
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_generators() {
        let g = CliffordGroup::shared();
        assert!(g.decompose(IDENTITY).is_empty());
        assert_eq!(g.decompose(1), &[PulseLabel::PlusX]);
        for a in 0..24u8 {
            assert_eq!(g.compose(IDENTITY, a), a);
            assert_eq!(g.compose(a, IDENTITY), a);
            assert_eq!(g.compose(a, g.inverse(a)), IDENTITY);
        }
    }

    #[test]
    fn table_rows_and_columns_are_permutations() {
        let g = CliffordGroup::shared();
        for a in 0..24u8 {
            let mut row: Vec<u8> = (0..24u8).map(|b| g.compose(a, b)).collect();
            let mut col: Vec<u8> = (0..24u8).map(|b| g.compose(b, a)).collect();
            row.sort_unstable();
            col.sort_unstable();
            assert_eq!(row, (0..24u8).collect::<Vec<_>>());
            assert_eq!(col, (0..24u8).collect::<Vec<_>>());
        }
    }

    #[test]
    fn exhaustive_products_match_matrices() {
        let g = CliffordGroup::shared();
        for a in g.elements() {
            for b in g.elements() {
                let c = g.compose(a.index, b.index);
                assert!((b.rep * a.rep).eq_up_to_phase(&g.element(c).rep, 1e-10));
            }
        }
    }

    #[test]
    fn decompositions_reproduce_representatives() {
        let g = CliffordGroup::shared();
        for e in g.elements() {
            assert!(word_unitary(&e.pulses).eq_up_to_phase(&e.rep, 1e-10));
            let c = e.rep.canonical();
            let err: f64 = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| (c.matrix[i][j] - e.rep.matrix[i][j]).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn minimal_word_lengths() {
        let g = CliffordGroup::shared();
        let z90 = crate::linalg::UnitaryOp::z_rotation(std::f64::consts::FRAC_PI_2);
        let idx = g.find(&z90).unwrap();
        // Two perpendicular quarter turns compose to a 120° rotation, so a
        // quarter turn about Z cannot be built from fewer than three pulses.
        assert_eq!(min_pulse_decomposition(idx).unwrap().len(), 3);
        // A half turn about Z is the only element needing four pulses.
        let z180 = g
            .find(&crate::linalg::UnitaryOp::z_rotation(std::f64::consts::PI))
            .unwrap();
        for i in 0..24u8 {
            let len = min_pulse_decomposition(i).unwrap().len();
            assert_eq!(len, g.decompose(i).len());
            assert_eq!(len == 4, i == z180);
        }
    }

    #[test]
    fn mean_pulse_count() {
        let g = CliffordGroup::shared();
        let mut hist = [0usize; 5];
        for e in g.elements() {
            hist[e.pulses.len()] += 1;
        }
        assert_eq!(hist, [1, 4, 10, 8, 1]);
        assert!((g.pulses_per_clifford() - 52.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn recovery_of_pair_is_identity() {
        let g = CliffordGroup::shared();
        for a in 0..24u8 {
            assert_eq!(g.recovery_gate(&[a]).unwrap().index, g.inverse(a));
            assert_eq!(g.recovery_gate(&[a, g.inverse(a)]).unwrap().index, IDENTITY);
        }
        assert!(g.recovery_gate(&[]).is_err());
    }
}
