//! Idealized cross-Kerr parity-check gate and X-homodyne readout.
//!
//! A parity check on modes `(x, y)` couples both photons to one coherent probe.
//! The probe picks up `+θ` for `|HH⟩`, `−θ` for `|VV⟩` and nothing for `|HV⟩`
//! or `|VH⟩`. Phases are tracked as exact integer tags in units of θ. The
//! homodyne read only sees `|tag|`, so the `±θ` branches are merged back
//! coherently with no relative phase (perfect classical feed-forward).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{Branch, ModeLabel, PureState};

/// One coherent probe beam.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProbeId(pub u32);

impl fmt::Display for ProbeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "probe{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParityOutcome {
    /// Probe shifted by ±θ: the pair was `HH` or `VV`.
    Even,
    /// No shift: `HV` or `VH`.
    Odd,
}

impl ParityOutcome {
    pub fn symbol(self) -> char {
        match self {
            ParityOutcome::Even => 'E',
            ParityOutcome::Odd => 'O',
        }
    }
}

impl fmt::Display for ParityOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Debug)]
pub struct ParityBranch {
    pub outcome: ParityOutcome,
    pub probability: f64,
    pub state: PureState,
}

/// Couples modes `x`, `y` to `probe`: adds +1 to the probe tag on `HH`, −1 on
/// `VV`, 0 otherwise. Amplitudes are untouched.
pub fn apply_pcg(state: &PureState, x: &ModeLabel, y: &ModeLabel, probe: ProbeId) -> Result<PureState> {
    if state.pending.contains(&probe) || state.spent.contains(&probe) {
        return Err(Error::ProbeReused(probe));
    }
    if x == y {
        return Err(Error::DuplicateMode(x.clone()));
    }
    let ix = state.index_of(x)?;
    let iy = state.index_of(y)?;
    let mut out = state.clone_shell();
    out.pending.push(probe);
    out.terms = state
        .terms
        .iter()
        .map(|(b, a)| {
            let tag = match (b.ket >> ix & 1, b.ket >> iy & 1) {
                (0, 0) => 1,
                (1, 1) => -1,
                _ => 0,
            };
            let mut tags = b.tags.clone();
            tags.push(tag);
            (Branch { ket: b.ket, tags }, *a)
        })
        .collect();
    Ok(out)
}

/// Reads `probe`. Returns the Even and/or Odd branches that have non-zero
/// probability, Even first. Each post-state is normalized and no longer
/// carries the probe's tag.
pub fn homodyne(state: &PureState, probe: ProbeId) -> Result<Vec<ParityBranch>> {
    let slot = state
        .pending
        .iter()
        .position(|p| *p == probe)
        .ok_or(Error::ProbeUnwritten(probe))?;

    let mut even: BTreeMap<Branch, Complex64> = BTreeMap::new();
    let mut odd: BTreeMap<Branch, Complex64> = BTreeMap::new();
    for (b, a) in &state.terms {
        let tag = b.tags[slot];
        let mut tags = b.tags.clone();
        tags.remove(slot);
        let target = match tag.abs() {
            0 => &mut odd,
            1 => &mut even,
            _ => return Err(Error::TagOverflow { probe, tag }),
        };
        // ±θ branches land on the same key and add coherently
        *target.entry(Branch { ket: b.ket, tags }).or_default() += a;
    }

    let mut shell = state.clone_shell();
    shell.pending.remove(slot);
    shell.spent.insert(probe);
    let total = state.norm_sqr();

    let mut out = Vec::with_capacity(2);
    for (outcome, terms) in [(ParityOutcome::Even, even), (ParityOutcome::Odd, odd)] {
        let mut post = PureState { terms, ..shell.clone() };
        post.prune();
        if post.terms.is_empty() {
            continue;
        }
        let probability = post.norm_sqr() / total;
        out.push(ParityBranch { outcome, probability, state: post.normalized()? });
    }
    Ok(out)
}

/// A probe id not yet written or read on this state.
pub fn fresh_probe(state: &PureState) -> ProbeId {
    let next = state
        .pending
        .iter()
        .chain(state.spent.iter())
        .map(|p| p.0 + 1)
        .max()
        .unwrap_or(1);
    ProbeId(next)
}

/// Parity check with a fresh probe followed immediately by its homodyne read.
pub fn parity_check(state: &PureState, x: &ModeLabel, y: &ModeLabel) -> Result<Vec<ParityBranch>> {
    let probe = fresh_probe(state);
    homodyne(&apply_pcg(state, x, y, probe)?, probe)
}
