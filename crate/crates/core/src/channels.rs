//! Noisy logic-pair ensembles and the error channels acting on them.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{default_modes, LogicKind, ModeLabel, PureState};

/// Weight sums must hit 1 within this.
pub const WEIGHT_TOL: f64 = 1e-10;

/// Largest registry [`density_matrix`] will expand.
pub const MAX_DENSE_PHOTONS: usize = 12;

/// Which error hit the target state `Φ⁺_m`.
///
/// Photon indices are 1-based and address logic qubit A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorKind {
    /// `Φ⁺ → Ψ⁺`
    LogicBitFlip,
    /// `Φ⁺ → Φ⁻`
    LogicPhaseFlip,
    /// X on photon `a_j`
    PhysicalBitFlip(usize),
    /// Z on photon `a_j`
    PhysicalPhaseFlip(usize),
}

impl ErrorKind {
    /// The erroneous pure state the channel produces from `Φ⁺_m`.
    pub fn error_state(self, m: usize) -> Result<PureState> {
        match self {
            ErrorKind::LogicBitFlip => PureState::logic_bell(LogicKind::PsiPlus, m),
            ErrorKind::LogicPhaseFlip => PureState::logic_bell(LogicKind::PhiMinus, m),
            ErrorKind::PhysicalBitFlip(j) => PureState::upsilon(m, j),
            ErrorKind::PhysicalPhaseFlip(j) => {
                if j == 0 || j > m {
                    return Err(Error::FlipIndex { index: j, m });
                }
                PureState::logic_bell(LogicKind::PhiPlus, m)?.apply_z(&default_modes('a', m)[j - 1])
            }
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::LogicBitFlip => write!(f, "logic-bit"),
            ErrorKind::LogicPhaseFlip => write!(f, "logic-phase"),
            ErrorKind::PhysicalBitFlip(j) => write!(f, "physical-bit({j})"),
            ErrorKind::PhysicalPhaseFlip(j) => write!(f, "physical-phase({j})"),
        }
    }
}

/// A finite ensemble `Σ wᵢ |ψᵢ⟩⟨ψᵢ|` of pure states on one registry.
#[derive(Clone, Debug)]
pub struct MixedState {
    components: Vec<(f64, PureState)>,
}

impl MixedState {
    /// Zero-weight components are dropped; the rest must be positive and sum to 1.
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        let components: Vec<_> = components.into_iter().filter(|(w, _)| *w != 0.0).collect();
        let (_, first) = components.first().ok_or(Error::EmptyMixture)?;
        let sum: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w <= 0.0 || !w.is_finite()) || (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::BadWeights(sum));
        }
        for (_, s) in &components {
            if s.registry() != first.registry() {
                return Err(Error::RegistryMismatch {
                    left: format!("{:?}", first.registry()),
                    right: format!("{:?}", s.registry()),
                });
            }
            if !s.pending_probes().is_empty() {
                return Err(Error::PendingProbes(s.pending_probes().to_vec()));
            }
        }
        Ok(Self { components })
    }

    pub fn pure(state: PureState) -> Self {
        Self { components: vec![(1.0, state)] }
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn registry(&self) -> &[ModeLabel] {
        self.components[0].1.registry()
    }

    /// `Σ wᵢ |⟨target|ψᵢ⟩|²`.
    pub fn fidelity(&self, target: &PureState) -> Result<f64> {
        self.components
            .iter()
            .map(|(w, s)| s.fidelity_pure(target).map(|f| w * f))
            .sum()
    }

    /// Merges components that are the same ray (equal up to global phase).
    pub fn merged(&self, tol: f64) -> Self {
        let mut out: Vec<(f64, PureState)> = Vec::new();
        for (w, s) in &self.components {
            match out.iter_mut().find(|(_, t)| t.eq_up_to_phase(s, tol)) {
                Some((acc, _)) => *acc += w,
                None => out.push((*w, s.clone())),
            }
        }
        Self { components: out }
    }

    pub fn density_matrix(&self) -> Result<DMatrix<Complex64>> {
        density_matrix(self)
    }
}

/// `F Φ⁺_m + (1−F) · error state`.
pub fn make_mixture(kind: ErrorKind, f: f64, m: usize) -> Result<MixedState> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::FidelityOutOfRange(f));
    }
    let target = PureState::logic_bell(LogicKind::PhiPlus, m)?;
    let error = kind.error_state(m)?;
    MixedState::new(vec![(f, target), (1.0 - f, error)])
}

pub fn fidelity(mixed: &MixedState, target: &PureState) -> Result<f64> {
    mixed.fidelity(target)
}

/// Dense `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`; basis index bit `i` is set when `registry[i]` is V.
pub fn density_matrix(mixed: &MixedState) -> Result<DMatrix<Complex64>> {
    let n = mixed.registry().len();
    if n > MAX_DENSE_PHOTONS {
        return Err(Error::InstanceTooLarge(n, MAX_DENSE_PHOTONS));
    }
    let dim = 1usize << n;
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for (w, s) in mixed.components() {
        let v = dense_vector(s);
        rho += (&v * v.adjoint()) * Complex64::new(*w, 0.0);
    }
    Ok(rho)
}

pub(crate) fn dense_vector(s: &PureState) -> nalgebra::DVector<Complex64> {
    let mut v = nalgebra::DVector::<Complex64>::zeros(1 << s.num_modes());
    for (b, a) in &s.terms {
        v[b.ket as usize] += a;
    }
    v
}

/// Result of applying Z to each single photon of `Φ⁺_m` and comparing with `Ψ⁺_m`.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseFlipEquivalence {
    pub m: usize,
    /// `(photon, |⟨Ψ⁺_m|Z_photon Φ⁺_m⟩|²)` for every photon of A and B.
    pub per_photon: Vec<(ModeLabel, f64)>,
    pub holds: bool,
}

/// Checks whether a physical phase flip on any single photon turns `Φ⁺_m`
/// into `Ψ⁺_m` (up to global phase).
pub fn phase_flip_equivalence(m: usize) -> Result<PhaseFlipEquivalence> {
    let phi = PureState::logic_bell(LogicKind::PhiPlus, m)?;
    let psi = PureState::logic_bell(LogicKind::PsiPlus, m)?;
    let per_photon = phi
        .registry()
        .iter()
        .map(|p| Ok((p.clone(), phi.apply_z(p)?.fidelity_pure(&psi)?)))
        .collect::<Result<Vec<_>>>()?;
    let holds = per_photon.iter().all(|(_, f)| *f >= 1.0 - 1e-12);
    Ok(PhaseFlipEquivalence { m, per_photon, holds })
}

pub fn apply_channel_equivalence_check(m: usize) -> Result<bool> {
    Ok(phase_flip_equivalence(m)?.holds)
}
