use serde::{Deserialize, Serialize};

use super::distill::summarize;
use super::{Correction, LogEntry, ParityPattern, RoundResult};
use crate::channels::MixedState;
use crate::error::{Error, Result};
use crate::qnd::{apply_pcg, homodyne, ParityOutcome, ProbeId};
use crate::state::{default_modes, LogicKind, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// The flipped photon `a_j` is known; check it against one neighbour.
    KnownLocation(usize),
    /// Check every consecutive pair of A and infer the flipped photon.
    Localize,
}

/// The photon adjacent to exactly the odd checks of a consecutive-pair sweep
/// (`checks[k]` is the check on `a_{k+1}, a_{k+2}`). `None` if nothing is odd
/// or no single flip explains the pattern. With one check (`m = 2`) both
/// photons fit; the first is returned.
pub fn infer_flip(checks: &[ParityOutcome], m: usize) -> Option<usize> {
    let odd: Vec<usize> = (0..checks.len()).filter(|&k| checks[k] == ParityOutcome::Odd).collect();
    if odd.is_empty() {
        return None;
    }
    // photon j (1-based) touches checks j-2 and j-1 (0-based)
    (1..=m).find(|&j| {
        let touching: Vec<usize> = [j.checked_sub(2), (j < m).then(|| j - 1)]
            .into_iter()
            .flatten()
            .collect();
        touching == odd
    })
}

/// Corrects a single physical bit flip on logic qubit A of one pair. No
/// second copy and no post-selection: every branch is kept.
///
/// Fails with [`Error::CorrectionIncomplete`] if the corrected output is not
/// `Φ⁺_m`, which exposes inputs the strategy cannot handle.
pub fn correct_physical_bitflip(input: &MixedState, m: usize, strategy: Strategy) -> Result<RoundResult> {
    let target = PureState::logic_bell(LogicKind::PhiPlus, m)?;
    if input.registry() != target.registry() {
        return Err(Error::MalformedMixture(format!("input is not on the m = {m} registry")));
    }
    let a = default_modes('a', m);
    let checks: Vec<(usize, usize)> = match strategy {
        Strategy::KnownLocation(j) => {
            if j == 0 || j > m {
                return Err(Error::FlipIndex { index: j, m });
            }
            let neighbour = if j < m { j + 1 } else { j - 1 };
            vec![(j, neighbour)]
        }
        Strategy::Localize => (1..m).map(|k| (k, k + 1)).collect(),
    };

    let mut weighted = Vec::new();
    let mut log = Vec::new();
    for (c, (w, s)) in input.components().iter().enumerate() {
        let mut tagged = s.clone();
        for (n, &(x, y)) in checks.iter().enumerate() {
            tagged = apply_pcg(&tagged, &a[x - 1], &a[y - 1], ProbeId(n as u32 + 1))?;
        }
        let mut branches = vec![(Vec::new(), *w, tagged)];
        for n in 0..checks.len() {
            let mut next = Vec::new();
            for (prefix, p, st) in branches {
                for b in homodyne(&st, ProbeId(n as u32 + 1))? {
                    let mut pat: Vec<ParityOutcome> = prefix.clone();
                    pat.push(b.outcome);
                    next.push((pat, p * b.probability, b.state));
                }
            }
            branches = next;
        }
        for (pattern, p, st) in branches {
            let flip = match strategy {
                Strategy::KnownLocation(j) => (pattern[0] == ParityOutcome::Odd).then_some(j),
                Strategy::Localize => infer_flip(&pattern, m),
            };
            let corrections: Vec<Correction> = flip.map(|j| Correction::x(a[j - 1].clone())).into_iter().collect();
            let out = corrections.iter().try_fold(st, |s, c| c.apply(&s))?;
            let fid = out.fidelity_pure(&target)?;
            log.push(LogEntry {
                components: vec![c],
                probe_pattern: ParityPattern(pattern),
                measurement: Vec::new(),
                corrections,
                probability: p,
            });
            weighted.push((p, out, fid));
        }
    }
    let result = summarize(weighted, log, input.fidelity(&target)?, &target)?;
    if result.output_fidelity < 1.0 - 1e-12 {
        return Err(Error::CorrectionIncomplete(result.output_fidelity));
    }
    Ok(result)
}
