use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Branch, ModeLabel, PureState, Sign};
use crate::error::{Error, Result};

/// One outcome of a diagonal-basis measurement.
#[derive(Clone, Debug)]
pub struct DiagOutcome {
    /// One sign per measured mode, in the order the modes were requested.
    pub pattern: Vec<Sign>,
    pub probability: f64,
    /// Normalized post-measurement state; measured modes are gone from its registry.
    pub state: PureState,
}

impl PureState {
    /// Projective measurement of `modes` in the `|±⟩` basis.
    ///
    /// Enumerates all `2^k` sign patterns and returns those with non-zero
    /// probability, in lexicographic order (`+` before `-`, first mode most
    /// significant).
    pub fn measure_diag(&self, modes: &[ModeLabel]) -> Result<Vec<DiagOutcome>> {
        if modes.is_empty() {
            return Err(Error::EmptyModeList);
        }
        let idx: Vec<usize> = modes.iter().map(|m| self.index_of(m)).collect::<Result<_>>()?;
        for (n, i) in idx.iter().enumerate() {
            if idx[..n].contains(i) {
                return Err(Error::DuplicateMode(modes[n].clone()));
            }
        }
        let k = idx.len();
        if k > 24 {
            return Err(Error::TooManyModes(k, 24));
        }
        let (kept, remap) = self.reduced_positions(&idx);

        // Per term: which measured photons are V (bit n ↔ modes[n]) and the residual branch.
        let split: Vec<(u64, Branch, Complex64)> = self
            .terms
            .iter()
            .map(|(b, a)| {
                let v_mask = idx
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| b.ket >> i & 1 == 1)
                    .fold(0u64, |acc, (n, _)| acc | 1 << n);
                let rest = remap
                    .iter()
                    .enumerate()
                    .filter_map(|(i, to)| to.map(|t| (i, t)))
                    .filter(|(i, _)| b.ket >> i & 1 == 1)
                    .fold(0u64, |acc, (_, t)| acc | 1 << t);
                (v_mask, Branch { ket: rest, tags: b.tags.clone() }, *a)
            })
            .collect();

        let scale = 0.5f64.powf(k as f64 / 2.0);
        let mut out = Vec::new();
        for outcome in 0u64..1 << k {
            // bit n of `minus` set ⇔ mode n read '−'; ⟨−|V⟩ = −1/√2
            let minus = reverse_bits(outcome, k);
            let mut terms: BTreeMap<Branch, Complex64> = BTreeMap::new();
            for (v_mask, rest, a) in &split {
                let sign = if (v_mask & minus).count_ones() % 2 == 1 { -scale } else { scale };
                *terms.entry(rest.clone()).or_default() += a * sign;
            }
            let mut post = PureState {
                registry: kept.clone(),
                terms,
                pending: self.pending.clone(),
                spent: self.spent.clone(),
            };
            post.prune();
            if post.terms.is_empty() {
                continue;
            }
            let probability = post.norm_sqr();
            let pattern = (0..k)
                .map(|n| if minus >> n & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect();
            out.push(DiagOutcome { pattern, probability, state: post.normalized()? });
        }
        Ok(out)
    }
}

/// Maps the enumeration counter onto "first mode is the most significant digit".
fn reverse_bits(x: u64, k: usize) -> u64 {
    (0..k).fold(0, |acc, n| acc | ((x >> (k - 1 - n)) & 1) << n)
}
