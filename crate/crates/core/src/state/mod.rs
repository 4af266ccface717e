//! Sparse polarization states over named spatial modes.
//!
//! A [`PureState`] maps basis kets to complex amplitudes. Each ket is a `u64`
//! whose bit `i` is set when the photon in `registry[i]` is vertically
//! polarized. The registry is kept in canonical [`ModeLabel`] order, so two
//! states over the same modes always agree on bit positions.
//!
//! Between a parity-check gate and its homodyne read every term also carries
//! one integer phase tag per open probe (units of the Kerr phase). Terms that
//! share a ket but differ in tags are distinct branches.

mod constructors;
mod measure;
mod mode;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnd::ProbeId;

pub use constructors::{default_modes, BellKind, LogicKind, StateKind};
pub use measure::DiagOutcome;
pub use mode::{mode_range, modes, ModeLabel};

/// Amplitudes with modulus below this are dropped after every operation.
pub const PRUNE: f64 = 1e-14;

/// Kets are packed into a `u64`.
pub const MAX_MODES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

/// Outcome of a measurement in the diagonal basis `|±⟩ = (|H⟩ ± |V⟩)/√2`,
/// and the sign of a GHZ state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A 2x2 single-photon operator, rows indexed by output polarization.
type Gate = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn hadamard_gate() -> Gate {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

const X_GATE: Gate = [[ZERO, ONE], [ONE, ZERO]];
const Z_GATE: Gate = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Branch {
    pub(crate) ket: u64,
    pub(crate) tags: Vec<i32>,
}

impl Branch {
    pub(crate) fn plain(ket: u64) -> Self {
        Self { ket, tags: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct PureState {
    pub(crate) registry: Vec<ModeLabel>,
    pub(crate) terms: BTreeMap<Branch, Complex64>,
    /// Probes written by a parity check and not yet read; tag vectors follow this order.
    pub(crate) pending: Vec<ProbeId>,
    pub(crate) spent: BTreeSet<ProbeId>,
}

fn check_distinct(modes: &[ModeLabel]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for m in modes {
        if !seen.insert(m) {
            return Err(Error::DuplicateMode(m.clone()));
        }
    }
    Ok(())
}

fn registry_string(reg: &[ModeLabel]) -> String {
    reg.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
}

impl PureState {
    /// Builds a state from kets written as `H`/`V` strings over `modes`
    /// (in the order given). Amplitudes are taken literally; repeated kets add up.
    pub fn from_kets<S: AsRef<str>>(
        modes: &[ModeLabel],
        kets: impl IntoIterator<Item = (S, Complex64)>,
    ) -> Result<Self> {
        check_distinct(modes)?;
        if modes.len() > MAX_MODES {
            return Err(Error::TooManyModes(modes.len(), MAX_MODES));
        }
        let mut registry = modes.to_vec();
        registry.sort();
        let position: Vec<usize> = modes
            .iter()
            .map(|m| registry.binary_search(m).expect("present"))
            .collect();

        let mut terms = BTreeMap::new();
        for (ket, amp) in kets {
            let ket = ket.as_ref();
            if ket.chars().count() != modes.len() {
                return Err(Error::InvalidArgument(format!(
                    "ket {ket:?} does not match {} modes",
                    modes.len()
                )));
            }
            let mut bits = 0u64;
            for (i, c) in ket.chars().enumerate() {
                match c {
                    'H' | 'h' | '0' => {}
                    'V' | 'v' | '1' => bits |= 1 << position[i],
                    _ => return Err(Error::InvalidArgument(format!("bad ket symbol {c:?}"))),
                }
            }
            *terms.entry(Branch::plain(bits)).or_insert(ZERO) += amp;
        }
        let mut state = Self {
            registry,
            terms,
            pending: Vec::new(),
            spent: BTreeSet::new(),
        };
        state.prune();
        Ok(state)
    }

    /// The empty-registry state with amplitude 1.
    pub fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Branch::plain(0), ONE);
        Self {
            registry: Vec::new(),
            terms,
            pending: Vec::new(),
            spent: BTreeSet::new(),
        }
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE);
    }

    pub fn registry(&self) -> &[ModeLabel] {
        &self.registry
    }

    pub fn num_modes(&self) -> usize {
        self.registry.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn pending_probes(&self) -> &[ProbeId] {
        &self.pending
    }

    pub fn spent_probes(&self) -> impl Iterator<Item = ProbeId> + '_ {
        self.spent.iter().copied()
    }

    pub fn index_of(&self, mode: &ModeLabel) -> Result<usize> {
        self.registry
            .binary_search(mode)
            .map_err(|_| Error::UnknownMode(mode.clone()))
    }

    pub fn contains(&self, mode: &ModeLabel) -> bool {
        self.registry.binary_search(mode).is_ok()
    }

    pub fn polarization(&self, ket: u64, mode: &ModeLabel) -> Result<Polarization> {
        let i = self.index_of(mode)?;
        Ok(if ket >> i & 1 == 1 { Polarization::V } else { Polarization::H })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < PRUNE {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.terms.values_mut() {
            *a *= factor;
        }
        out.prune();
        out
    }

    pub fn ket_string(&self, ket: u64) -> String {
        (0..self.registry.len())
            .map(|i| if ket >> i & 1 == 1 { 'V' } else { 'H' })
            .collect()
    }

    /// Amplitude of an untagged basis ket written over the canonical registry.
    pub fn amplitude(&self, ket: &str) -> Complex64 {
        let mut bits = 0u64;
        for (i, c) in ket.chars().enumerate() {
            if c == 'V' {
                bits |= 1 << i;
            }
        }
        self.terms
            .iter()
            .filter(|(b, _)| b.ket == bits)
            .map(|(_, a)| *a)
            .sum()
    }

    /// `(ket, tags, amplitude)` for every stored branch in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (String, &[i32], Complex64)> + '_ {
        self.terms
            .iter()
            .map(|(b, a)| (self.ket_string(b.ket), b.tags.as_slice(), *a))
    }

    fn apply_gate(&self, mode: &ModeLabel, gate: &Gate) -> Result<Self> {
        let i = self.index_of(mode)?;
        let mask = 1u64 << i;
        let mut terms: BTreeMap<Branch, Complex64> = BTreeMap::new();
        for (b, a) in &self.terms {
            let input = (b.ket >> i & 1) as usize;
            for (output, row) in gate.iter().enumerate() {
                let g = row[input];
                if g == ZERO {
                    continue;
                }
                let ket = if output == 1 { b.ket | mask } else { b.ket & !mask };
                *terms
                    .entry(Branch { ket, tags: b.tags.clone() })
                    .or_insert(ZERO) += g * a;
            }
        }
        let mut out = Self { terms, ..self.clone_shell() };
        out.prune();
        Ok(out)
    }

    /// Same registry and probe bookkeeping, no terms.
    pub(crate) fn clone_shell(&self) -> Self {
        Self {
            registry: self.registry.clone(),
            terms: BTreeMap::new(),
            pending: self.pending.clone(),
            spent: self.spent.clone(),
        }
    }

    /// `H → (H+V)/√2`, `V → (H−V)/√2` on one photon.
    pub fn apply_hadamard(&self, mode: &ModeLabel) -> Result<Self> {
        self.apply_gate(mode, &hadamard_gate())
    }

    /// Swaps `H ↔ V` on one photon.
    pub fn apply_x(&self, mode: &ModeLabel) -> Result<Self> {
        self.apply_gate(mode, &X_GATE)
    }

    /// `V → −V` on one photon.
    pub fn apply_z(&self, mode: &ModeLabel) -> Result<Self> {
        self.apply_gate(mode, &Z_GATE)
    }

    pub fn apply_hadamard_all(&self, modes: &[ModeLabel]) -> Result<Self> {
        modes
            .iter()
            .try_fold(self.clone(), |s, m| s.apply_hadamard(m))
    }

    /// Tensor product over disjoint registries. Neither side may have open probes.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        for s in [self, other] {
            if !s.pending.is_empty() {
                return Err(Error::PendingProbes(s.pending.clone()));
            }
        }
        if let Some(m) = other.registry.iter().find(|m| self.contains(m)) {
            return Err(Error::OverlappingRegistry(m.clone()));
        }
        if self.registry.len() + other.registry.len() > MAX_MODES {
            return Err(Error::TooManyModes(
                self.registry.len() + other.registry.len(),
                MAX_MODES,
            ));
        }
        let mut registry: Vec<ModeLabel> =
            self.registry.iter().chain(&other.registry).cloned().collect();
        registry.sort();
        let place = |reg: &[ModeLabel]| -> Vec<usize> {
            reg.iter()
                .map(|m| registry.binary_search(m).expect("merged"))
                .collect()
        };
        let left = place(&self.registry);
        let right = place(&other.registry);
        let mut terms = BTreeMap::new();
        for (bl, al) in &self.terms {
            let kl = scatter(bl.ket, &left);
            for (br, ar) in &other.terms {
                let ket = kl | scatter(br.ket, &right);
                *terms.entry(Branch::plain(ket)).or_insert(ZERO) += al * ar;
            }
        }
        let mut out = Self {
            registry,
            terms,
            pending: Vec::new(),
            spent: self.spent.union(&other.spent).copied().collect(),
        };
        out.prune();
        Ok(out)
    }

    /// Renames every mode through `rename`; the result is re-sorted into canonical order.
    pub fn relabel(&self, rename: impl Fn(&ModeLabel) -> ModeLabel) -> Result<Self> {
        let renamed: Vec<ModeLabel> = self.registry.iter().map(rename).collect();
        check_distinct(&renamed)?;
        let mut registry = renamed.clone();
        registry.sort();
        let position: Vec<usize> = renamed
            .iter()
            .map(|m| registry.binary_search(m).expect("present"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(b, a)| {
                (
                    Branch { ket: scatter(b.ket, &position), tags: b.tags.clone() },
                    *a,
                )
            })
            .collect();
        Ok(Self { registry, terms, ..self.clone_shell() })
    }

    /// Linear combination `Σ cᵢ |ψᵢ⟩` of states sharing one registry. Not renormalized.
    pub fn combine(parts: &[(Complex64, &PureState)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::EmptyMixture)?;
        let mut out = first.clone_shell();
        for (c, s) in parts {
            same_frame(first, s)?;
            for (b, a) in &s.terms {
                *out.terms.entry(b.clone()).or_insert(ZERO) += c * a;
            }
        }
        out.prune();
        Ok(out)
    }

    /// `⟨self|other⟩`. Registries (and any open probes) must match.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        same_frame(self, other)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(b, a)| other.terms.get(b).map(|o| a.conj() * o))
            .sum())
    }

    /// `|⟨target|self⟩|²`, normalized by both norms so it lies in `[0, 1]`.
    pub fn fidelity_pure(&self, target: &PureState) -> Result<f64> {
        let ip = target.inner_product(self)?;
        let n = self.norm_sqr() * target.norm_sqr();
        if n < PRUNE * PRUNE {
            return Err(Error::ZeroNorm);
        }
        Ok((ip.norm_sqr() / n).clamp(0.0, 1.0))
    }

    /// Largest amplitude difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        same_frame(self, other)?;
        let keys: BTreeSet<&Branch> = self.terms.keys().chain(other.terms.keys()).collect();
        Ok(keys
            .into_iter()
            .map(|k| {
                let a = self.terms.get(k).copied().unwrap_or(ZERO);
                let b = other.terms.get(k).copied().unwrap_or(ZERO);
                (a - b).norm()
            })
            .fold(0.0, f64::max))
    }

    /// Term-by-term equality within `tol` (literal signs, no global phase freedom).
    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Equality up to a global phase.
    pub fn eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        self.fidelity_pure(other).is_ok_and(|f| f >= 1.0 - tol)
    }

    /// Drops `modes` from the registry, keeping the remaining bits packed.
    pub(crate) fn reduced_positions(&self, measured: &[usize]) -> (Vec<ModeLabel>, Vec<Option<usize>>) {
        let mut kept = Vec::new();
        let mut map = vec![None; self.registry.len()];
        for (i, m) in self.registry.iter().enumerate() {
            if !measured.contains(&i) {
                map[i] = Some(kept.len());
                kept.push(m.clone());
            }
        }
        (kept, map)
    }
}

/// Moves bit `i` of `ket` to bit `position[i]`.
pub(crate) fn scatter(ket: u64, position: &[usize]) -> u64 {
    position
        .iter()
        .enumerate()
        .filter(|(i, _)| ket >> i & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

fn same_frame(a: &PureState, b: &PureState) -> Result<()> {
    if a.registry != b.registry || a.pending != b.pending {
        return Err(Error::RegistryMismatch {
            left: registry_string(&a.registry),
            right: registry_string(&b.registry),
        });
    }
    Ok(())
}

impl PartialEq for PureState {
    /// Exact equality within [`PRUNE`]; use [`PureState::approx_eq`] for tolerances.
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, PRUNE)
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", registry_string(&self.registry))?;
        for (i, (b, a)) in self.terms.iter().enumerate() {
            let sep = if i == 0 { " " } else { "\n  + " };
            write!(f, "{sep}({:+.6}{:+.6}i)|{}⟩", a.re, a.im, self.ket_string(b.ket))?;
            if !b.tags.is_empty() {
                let tags: Vec<String> = self
                    .pending
                    .iter()
                    .zip(&b.tags)
                    .map(|(p, t)| format!("{p}:{t:+}"))
                    .collect();
                write!(f, " {{{}}}", tags.join(" "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn from_kets_canonicalizes_order() {
        // given as (b1, a1): |HV⟩ means a1=V, b1=H
        let s = PureState::from_kets(&modes(&["b1", "a1"]), [("HV", c(1.0))]).unwrap();
        assert_eq!(s.registry(), modes(&["a1", "b1"]).as_slice());
        assert_eq!(s.amplitude("VH"), c(1.0));
        assert_eq!(s.amplitude("HV"), c(0.0));
    }

    #[test]
    fn duplicate_modes_rejected() {
        let err = PureState::from_kets(&modes(&["a1", "a1"]), [("HH", c(1.0))]).unwrap_err();
        assert!(matches!(err, Error::DuplicateMode(_)));
    }

    #[test]
    fn unknown_mode_errors() {
        let s = PureState::from_kets(&modes(&["a1"]), [("H", c(1.0))]).unwrap();
        let b1: ModeLabel = "b1".parse().unwrap();
        assert!(matches!(s.apply_x(&b1), Err(Error::UnknownMode(_))));
        assert!(matches!(s.apply_z(&b1), Err(Error::UnknownMode(_))));
        assert!(matches!(s.apply_hadamard(&b1), Err(Error::UnknownMode(_))));
    }

    #[test]
    fn hadamard_maps_h_to_plus() {
        let a1: ModeLabel = "a1".parse().unwrap();
        let s = PureState::from_kets(std::slice::from_ref(&a1), [("H", c(1.0))]).unwrap();
        let h = s.apply_hadamard(&a1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.amplitude("H") - c(r)).norm() < 1e-15);
        assert!((h.amplitude("V") - c(r)).norm() < 1e-15);
        let v = PureState::from_kets(std::slice::from_ref(&a1), [("V", c(1.0))]).unwrap();
        let hv = v.apply_hadamard(&a1).unwrap();
        assert!((hv.amplitude("V") - c(-r)).norm() < 1e-15);
    }

    #[test]
    fn cancellation_prunes_terms() {
        let a1: ModeLabel = "a1".parse().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::from_kets(std::slice::from_ref(&a1), [("H", c(r)), ("V", c(r))]).unwrap();
        let h = plus.apply_hadamard(&a1).unwrap();
        assert_eq!(h.num_terms(), 1);
        assert!((h.amplitude("H") - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn tensor_interleaves_registries() {
        let a = PureState::from_kets(&modes(&["a1", "c1"]), [("HV", c(1.0))]).unwrap();
        let b = PureState::from_kets(&modes(&["b1"]), [("V", c(1.0))]).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.registry(), modes(&["a1", "b1", "c1"]).as_slice());
        assert_eq!(t.amplitude("HVV"), c(1.0));
        assert!(matches!(a.tensor(&a), Err(Error::OverlappingRegistry(_))));
    }

    #[test]
    fn relabel_resorts() {
        let s = PureState::from_kets(&modes(&["a1", "a2"]), [("HV", c(1.0))]).unwrap();
        let r = s
            .relabel(|m| if m.index() == 1 { "c1".parse().unwrap() } else { "b2".parse().unwrap() })
            .unwrap();
        // a1 -> c1 (H), a2 -> b2 (V); canonical order b2 < c1
        assert_eq!(r.registry(), modes(&["b2", "c1"]).as_slice());
        assert_eq!(r.amplitude("VH"), c(1.0));
    }

    #[test]
    fn inner_product_requires_same_registry() {
        let a = PureState::from_kets(&modes(&["a1"]), [("H", c(1.0))]).unwrap();
        let b = PureState::from_kets(&modes(&["b1"]), [("H", c(1.0))]).unwrap();
        assert!(matches!(a.inner_product(&b), Err(Error::RegistryMismatch { .. })));
    }
}
