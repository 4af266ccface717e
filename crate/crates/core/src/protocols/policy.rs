use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Wiring;
use crate::error::{Error, Result};
use crate::qnd::ParityOutcome;
use crate::state::{ModeLabel, PureState};

/// Parity outcomes in probe order: all A-side probes `(a_i, partner)` for
/// `i = 1..m`, then all B-side probes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ParityPattern(pub Vec<ParityOutcome>);

impl ParityPattern {
    pub fn all_even(len: usize) -> Self {
        Self(vec![ParityOutcome::Even; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_even(&self) -> bool {
        self.0.iter().all(|o| *o == ParityOutcome::Even)
    }

    /// Parses the photon-major labelling `A1 B1 A2 B2 ...` (as in `E_{a1a2}E_{b1b2}E_{a3a4}E_{b3b4}`,
    /// where subscripts list photon index first) into probe order.
    pub fn from_interleaved(s: &str) -> Result<Self> {
        let flat: ParityPattern = s.parse()?;
        if !flat.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("interleaved pattern {s:?} has odd length")));
        }
        let a = flat.0.iter().step_by(2);
        let b = flat.0.iter().skip(1).step_by(2);
        Ok(Self(a.chain(b).copied().collect()))
    }
}

impl fmt::Display for ParityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|o| write!(f, "{}", o.symbol()))
    }
}

impl FromStr for ParityPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'E' => Ok(ParityOutcome::Even),
                'O' => Ok(ParityOutcome::Odd),
                _ => Err(Error::InvalidArgument(format!("bad parity symbol {c:?} in {s:?}"))),
            })
            .collect::<Result<_>>()
            .map(Self)
    }
}

impl TryFrom<String> for ParityPattern {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ParityPattern> for String {
    fn from(p: ParityPattern) -> String {
        p.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Z,
}

/// A single-photon Pauli flip used as feed-forward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Correction {
    pub op: Pauli,
    pub mode: ModeLabel,
}

impl Correction {
    pub fn x(mode: ModeLabel) -> Self {
        Self { op: Pauli::X, mode }
    }

    pub fn z(mode: ModeLabel) -> Self {
        Self { op: Pauli::Z, mode }
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        match self.op {
            Pauli::X => state.apply_x(&self.mode),
            Pauli::Z => state.apply_z(&self.mode),
        }
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.op, self.mode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    /// Accept only the all-even pattern.
    Canonical,
    /// Also accept the mirrored odd patterns, with bit-flip feed-forward.
    Extended,
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyKind::Canonical => "canonical",
            PolicyKind::Extended => "extended",
        })
    }
}

impl FromStr for PolicyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(PolicyKind::Canonical),
            "extended" => Ok(PolicyKind::Extended),
            _ => Err(Error::InvalidArgument(format!("unknown policy {s:?}"))),
        }
    }
}

/// Accepted probe patterns and the feed-forward each one needs.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionPolicy {
    name: String,
    m: usize,
    entries: BTreeMap<ParityPattern, Vec<Correction>>,
}

impl SelectionPolicy {
    /// Every pattern must cover the `2m` probes, and every pattern other than
    /// all-even must name at least one correction.
    pub fn new(
        name: impl Into<String>,
        m: usize,
        entries: BTreeMap<ParityPattern, Vec<Correction>>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::PhotonsPerLogicQubit(m));
        }
        for (pattern, corrections) in &entries {
            if pattern.len() != 2 * m {
                return Err(Error::PatternLength {
                    pattern: pattern.to_string(),
                    expected: 2 * m,
                    got: pattern.len(),
                });
            }
            if !pattern.is_all_even() && corrections.is_empty() {
                return Err(Error::MissingCorrection(pattern.to_string()));
            }
        }
        if entries.is_empty() {
            return Err(Error::InvalidArgument("policy accepts no pattern".into()));
        }
        Ok(Self { name: name.into(), m, entries })
    }

    pub fn canonical(m: usize) -> Result<Self> {
        let entries = BTreeMap::from([(ParityPattern::all_even(2 * m), Vec::new())]);
        Self::new("canonical", m, entries)
    }

    /// Mirrored patterns (B side reads what A side reads) with A side in
    /// `{E^m, O^m, E O^(m-1), O E^(m-1)}`. Each odd probe gets an X on its kept photon.
    pub fn extended(m: usize) -> Result<Self> {
        let wiring = Wiring::new(m)?;
        let (e, o) = (ParityOutcome::Even, ParityOutcome::Odd);
        let mut sides = vec![vec![e; m], vec![o; m]];
        for (first, rest) in [(e, o), (o, e)] {
            let mut side = vec![rest; m];
            side[0] = first;
            sides.push(side);
        }
        sides.sort();
        sides.dedup();
        let entries = sides
            .into_iter()
            .map(|side| {
                let pattern = ParityPattern(side.iter().chain(&side).copied().collect());
                let corrections = wiring
                    .probes()
                    .iter()
                    .zip(&pattern.0)
                    .filter(|(_, o)| **o == ParityOutcome::Odd)
                    .map(|((kept, _), _)| Correction::x(kept.clone()))
                    .collect();
                (pattern, corrections)
            })
            .collect();
        Self::new("extended", m, entries)
    }

    pub fn of_kind(kind: PolicyKind, m: usize) -> Result<Self> {
        match kind {
            PolicyKind::Canonical => Self::canonical(m),
            PolicyKind::Extended => Self::extended(m),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn patterns(&self) -> impl Iterator<Item = &ParityPattern> {
        self.entries.keys()
    }

    /// Corrections for `pattern`, or `None` if it is rejected.
    pub fn corrections(&self, pattern: &ParityPattern) -> Option<&[Correction]> {
        self.entries.get(pattern).map(Vec::as_slice)
    }

    pub(crate) fn accepts_prefix(&self, prefix: &[ParityOutcome]) -> bool {
        self.entries.keys().any(|p| p.0.starts_with(prefix))
    }
}
