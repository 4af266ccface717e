//! Closed-form fidelity and yield maps, their iteration, and the harness that
//! checks them against exact simulation.

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{make_mixture, ErrorKind};
use crate::error::{Error, Result};
use crate::protocols::{distill_round, ExecMode, PolicyKind, SelectionPolicy};

fn check_f(f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::FidelityOutOfRange(f))
    }
}

/// `F² + (1−F)²`
fn agreement(f: f64) -> f64 {
    f * f + (1.0 - f) * (1.0 - f)
}

/// `F' = F² / (F² + (1−F)²)`.
pub fn fidelity_map(f: f64) -> Result<f64> {
    check_f(f)?;
    Ok(f * f / agreement(f))
}

/// Acceptance probability of one round on two copies of the `F` mixture.
///
/// Bit-flip circuit: `2^(1−2m) (F² + (1−F)²)` canonical, four times that extended.
/// Phase-flip circuit: `(F² + (1−F)²) / 2` canonical; the extended patterns
/// only add the all-odd one, doubling it. Physical bit-flip correction never rejects.
pub fn success_probability(f: f64, m: usize, kind: ErrorKind, policy: PolicyKind) -> Result<f64> {
    check_f(f)?;
    if m < 2 {
        return Err(Error::PhotonsPerLogicQubit(m));
    }
    let base = match kind {
        ErrorKind::PhysicalBitFlip(_) => return Ok(1.0),
        ErrorKind::LogicBitFlip | ErrorKind::PhysicalPhaseFlip(_) => match policy {
            PolicyKind::Canonical => 0.5f64.powi(2 * m as i32 - 1),
            PolicyKind::Extended => 4.0 * 0.5f64.powi(2 * m as i32 - 1),
        },
        ErrorKind::LogicPhaseFlip => match policy {
            PolicyKind::Canonical => 0.5,
            PolicyKind::Extended => 1.0,
        },
    };
    Ok(base * agreement(f))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationTrace {
    /// `F0, F1, ..., Fn`.
    pub f_sequence: Vec<f64>,
    /// Acceptance probability of round `i`, evaluated at `F_i`.
    pub success_probs: Vec<f64>,
    /// Surviving pairs per initial pair: `Π p_i / 2`, two pairs go in per round.
    pub expected_yield: f64,
}

/// Applies the fidelity map `rounds` times starting from `F0 > 1/2`.
pub fn iterate(f0: f64, rounds: usize, m: usize, kind: ErrorKind, policy: PolicyKind) -> Result<IterationTrace> {
    check_f(f0)?;
    if rounds == 0 {
        return Err(Error::NoRounds);
    }
    if f0 <= 0.5 {
        return Err(Error::NoImprovement(f0));
    }
    let mut f_sequence = vec![f0];
    let mut success_probs = Vec::with_capacity(rounds);
    let mut expected_yield = 1.0;
    for _ in 0..rounds {
        let f = *f_sequence.last().expect("non-empty");
        let p = success_probability(f, m, kind, policy)?;
        success_probs.push(p);
        expected_yield *= p / 2.0;
        f_sequence.push(fidelity_map(f)?);
    }
    Ok(IterationTrace { f_sequence, success_probs, expected_yield })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub f_in: f64,
    pub f_out_exact: f64,
    pub f_out_formula: f64,
    pub p_success_exact: f64,
    pub p_success_formula: f64,
    pub fidelity_diff: f64,
    pub probability_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub m: usize,
    pub kind: ErrorKind,
    pub policy: PolicyKind,
    pub rows: Vec<ComparisonRow>,
    pub max_fidelity_diff: f64,
    pub max_probability_diff: f64,
}

/// Runs an exact round at every grid point and sets it beside the closed forms.
pub fn compare_exact_vs_formula(grid: &[f64], m: usize, kind: ErrorKind, policy: PolicyKind) -> Result<ComparisonReport> {
    let sel = SelectionPolicy::of_kind(policy, m)?;
    let rows: Vec<ComparisonRow> = grid
        .par_iter()
        .map(|&f| {
            let input = make_mixture(kind, f, m)?;
            let r = distill_round(&input, kind, m, &sel, ExecMode::Exact)?;
            let f_out_formula = fidelity_map(f)?;
            let p_success_formula = success_probability(f, m, kind, policy)?;
            Ok(ComparisonRow {
                f_in: f,
                f_out_exact: r.output_fidelity,
                f_out_formula,
                p_success_exact: r.success_probability,
                p_success_formula,
                fidelity_diff: (r.output_fidelity - f_out_formula).abs(),
                probability_diff: (r.success_probability - p_success_formula).abs(),
            })
        })
        .collect::<Result<_>>()?;
    let max = |g: fn(&ComparisonRow) -> f64| rows.iter().map(g).fold(0.0, f64::max);
    Ok(ComparisonReport {
        m,
        kind,
        policy,
        max_fidelity_diff: max(|r| r.fidelity_diff),
        max_probability_diff: max(|r| r.probability_diff),
        rows,
    })
}
