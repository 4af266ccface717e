//! The distillation round, physical bit-flip correction and the selection policies.
//!
//! A round takes two copies of the same noisy logic pair. Copy 1 keeps modes
//! `a_i, b_i`; copy 2 is relabelled (`a_{m+i}, b_{m+i}` for `m = 2`, `c_i, d_i`
//! otherwise). One parity check links each photon of copy 1 with its partner
//! in copy 2. Accepted runs measure copy 2 in `|±⟩` and feed forward onto copy 1.

mod distill;
mod physical;
mod policy;

use serde::Serialize;

use crate::channels::MixedState;
use crate::error::{Error, Result};
use crate::state::{default_modes, ModeLabel, PureState, Sign};

pub use distill::{collapse, distill_round, verify_rejection, RejectionCase, RejectionReport};
pub use physical::{correct_physical_bitflip, infer_flip, Strategy};
pub use policy::{Correction, ParityPattern, Pauli, PolicyKind, SelectionPolicy};

/// Branch enumeration or seeded sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExecMode {
    Exact,
    /// Trial `t` draws from ChaCha8 seeded with `seed`, stream `t`.
    MonteCarlo { trials: u64, seed: u64 },
}

/// Which photons the parity checks pair up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wiring {
    m: usize,
    probes: Vec<(ModeLabel, ModeLabel)>,
}

impl Wiring {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::PhotonsPerLogicQubit(m));
        }
        let mut probes = Vec::with_capacity(2 * m);
        for letter in ['a', 'b'] {
            for kept in default_modes(letter, m) {
                let partner = partner_label(&kept, m);
                probes.push((kept, partner));
            }
        }
        Ok(Self { m, probes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `(kept, partner)` per probe; probe `k` in a pattern is entry `k`.
    pub fn probes(&self) -> &[(ModeLabel, ModeLabel)] {
        &self.probes
    }

    pub fn kept(&self) -> Vec<ModeLabel> {
        self.probes.iter().map(|(k, _)| k.clone()).collect()
    }

    pub fn partners(&self) -> Vec<ModeLabel> {
        self.probes.iter().map(|(_, p)| p.clone()).collect()
    }

    /// Moves a copy-1 state onto the copy-2 modes.
    pub fn second_copy(&self, state: &PureState) -> Result<PureState> {
        state.relabel(|mode| partner_label(mode, self.m))
    }
}

fn partner_label(mode: &ModeLabel, m: usize) -> ModeLabel {
    let (prefix, index) = match (m, mode.prefix()) {
        (2, p) => (p, mode.index() + 2),
        (_, "a") => ("c", mode.index()),
        (_, "b") => ("d", mode.index()),
        (_, p) => (p, mode.index() + m as u32),
    };
    ModeLabel::new(prefix, index).expect("valid label")
}

/// One accepted branch (exact) or one distinct sampled branch (Monte Carlo).
#[derive(Clone, Debug, Serialize)]
pub struct LogEntry {
    /// Indices of the input components each copy was drawn from.
    pub components: Vec<usize>,
    pub probe_pattern: ParityPattern,
    pub measurement: Vec<Sign>,
    pub corrections: Vec<Correction>,
    /// Unconditional probability (exact) or sampled frequency per trial.
    pub probability: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SamplingStats {
    pub trials: u64,
    pub accepted: u64,
    pub seed: u64,
    pub success_stderr: f64,
    pub fidelity_stderr: f64,
}

#[derive(Clone, Debug)]
pub struct RoundResult {
    pub success_probability: f64,
    /// Output conditioned on success.
    pub output: MixedState,
    pub outcome_log: Vec<LogEntry>,
    pub input_fidelity: f64,
    pub output_fidelity: f64,
    pub sampling: Option<SamplingStats>,
}
