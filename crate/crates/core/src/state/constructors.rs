use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{mode_range, ModeLabel, PureState, Sign};
use crate::error::{Error, Result};

/// Two-photon Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Logic Bell states of two GHZ-encoded logic qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl LogicKind {
    pub const ALL: [LogicKind; 4] = [
        LogicKind::PhiPlus,
        LogicKind::PhiMinus,
        LogicKind::PsiPlus,
        LogicKind::PsiMinus,
    ];
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        })
    }
}

impl fmt::Display for LogicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicKind::PhiPlus => "Phi+",
            LogicKind::PhiMinus => "Phi-",
            LogicKind::PsiPlus => "Psi+",
            LogicKind::PsiMinus => "Psi-",
        })
    }
}

/// Any of the canonical state families, as a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateKind {
    Bell(BellKind),
    Ghz(Sign),
    Logic(LogicKind),
}

impl StateKind {
    /// Builds the state on default modes: `a1,a2` for Bell states, `a1..am` for
    /// GHZ states, `a1..am, b1..bm` for logic states.
    pub fn build(self, m: usize) -> Result<PureState> {
        match self {
            StateKind::Bell(k) => PureState::bell(k, &default_modes('a', 2)),
            StateKind::Ghz(s) => PureState::ghz(s, &default_modes('a', m)),
            StateKind::Logic(k) => PureState::logic_bell(k, m),
        }
    }
}

/// `{letter}1 .. {letter}{m}`.
pub fn default_modes(letter: char, m: usize) -> Vec<ModeLabel> {
    mode_range(&letter.to_string(), 1, m)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl PureState {
    /// Two-mode Bell state with real amplitudes `±1/√2`.
    pub fn bell(kind: BellKind, modes: &[ModeLabel]) -> Result<Self> {
        if modes.len() != 2 {
            return Err(Error::ModeCount { expected: 2, got: modes.len() });
        }
        let r = FRAC_1_SQRT_2;
        let kets: [(&str, f64); 2] = match kind {
            BellKind::PhiPlus => [("HH", r), ("VV", r)],
            BellKind::PhiMinus => [("HH", r), ("VV", -r)],
            BellKind::PsiPlus => [("HV", r), ("VH", r)],
            BellKind::PsiMinus => [("HV", r), ("VH", -r)],
        };
        Self::from_kets(modes, kets.map(|(k, a)| (k, real(a))))
    }

    /// `(|H⟩^⊗m ± |V⟩^⊗m)/√2` over `modes` (m ≥ 2).
    pub fn ghz(sign: Sign, modes: &[ModeLabel]) -> Result<Self> {
        let m = modes.len();
        if m < 2 {
            return Err(Error::GhzTooSmall(m));
        }
        let h = "H".repeat(m);
        let v = "V".repeat(m);
        Self::from_kets(
            modes,
            [(h, real(FRAC_1_SQRT_2)), (v, real(sign.value() * FRAC_1_SQRT_2))],
        )
    }

    /// Logic Bell state with `m` photons per logic qubit on `a1..am, b1..bm`.
    pub fn logic_bell(kind: LogicKind, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::PhotonsPerLogicQubit(m));
        }
        Self::logic_bell_on(kind, &default_modes('a', m), &default_modes('b', m))
    }

    /// Logic Bell state built from its definition in terms of GHZ logic qubits:
    ///
    /// `Φ± = (GHZ⁺_A GHZ⁺_B ± GHZ⁻_A GHZ⁻_B)/√2`,
    /// `Ψ± = (GHZ⁺_A GHZ⁻_B ± GHZ⁻_A GHZ⁺_B)/√2`.
    pub fn logic_bell_on(kind: LogicKind, modes_a: &[ModeLabel], modes_b: &[ModeLabel]) -> Result<Self> {
        if modes_a.len() != modes_b.len() {
            return Err(Error::ModeCount { expected: modes_a.len(), got: modes_b.len() });
        }
        if modes_a.len() < 2 {
            return Err(Error::PhotonsPerLogicQubit(modes_a.len()));
        }
        if let Some(m) = modes_b.iter().find(|m| modes_a.contains(m)) {
            return Err(Error::OverlappingRegistry(m.clone()));
        }
        let ghz = |s, modes| Self::ghz(s, modes);
        let (pp, mm) = (
            ghz(Sign::Plus, modes_a)?.tensor(&ghz(Sign::Plus, modes_b)?)?,
            ghz(Sign::Minus, modes_a)?.tensor(&ghz(Sign::Minus, modes_b)?)?,
        );
        let (pm, mp) = (
            ghz(Sign::Plus, modes_a)?.tensor(&ghz(Sign::Minus, modes_b)?)?,
            ghz(Sign::Minus, modes_a)?.tensor(&ghz(Sign::Plus, modes_b)?)?,
        );
        let r = real(FRAC_1_SQRT_2);
        match kind {
            LogicKind::PhiPlus => Self::combine(&[(r, &pp), (r, &mm)]),
            LogicKind::PhiMinus => Self::combine(&[(r, &pp), (-r, &mm)]),
            LogicKind::PsiPlus => Self::combine(&[(r, &pm), (r, &mp)]),
            LogicKind::PsiMinus => Self::combine(&[(r, &pm), (-r, &mp)]),
        }
    }

    /// `Φ⁺_m` after a bit flip on photon `j` (1-based) of logic qubit A.
    pub fn upsilon(m: usize, j: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::PhotonsPerLogicQubit(m));
        }
        Self::upsilon_on(j, &default_modes('a', m), &default_modes('b', m))
    }

    pub fn upsilon_on(j: usize, modes_a: &[ModeLabel], modes_b: &[ModeLabel]) -> Result<Self> {
        let m = modes_a.len();
        if j == 0 || j > m {
            return Err(Error::FlipIndex { index: j, m });
        }
        Self::logic_bell_on(LogicKind::PhiPlus, modes_a, modes_b)?.apply_x(&modes_a[j - 1])
    }
}
