use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    Correction, ExecMode, LogEntry, ParityPattern, RoundResult, SamplingStats, SelectionPolicy, Wiring,
};
use crate::channels::{ErrorKind, MixedState};
use crate::error::{Error, Result};
use crate::qnd::{apply_pcg, homodyne, ParityOutcome, ProbeId};
use crate::state::{LogicKind, PureState, Sign};

const MERGE_TOL: f64 = 1e-12;

/// The logic bit flip is only visible to the parity checks after a Hadamard
/// on every photon; the logic phase flip is visible directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Circuit {
    Hadamard,
    Direct,
}

impl Circuit {
    fn for_kind(kind: ErrorKind) -> Result<Self> {
        match kind {
            ErrorKind::LogicBitFlip | ErrorKind::PhysicalPhaseFlip(_) => Ok(Circuit::Hadamard),
            ErrorKind::LogicPhaseFlip => Ok(Circuit::Direct),
            ErrorKind::PhysicalBitFlip(_) => Err(Error::InvalidArgument(
                "physical bit flips are corrected on a single pair, not distilled".into(),
            )),
        }
    }
}

struct Leaf {
    measurement: Vec<Sign>,
    /// Conditional on the probe pattern.
    probability: f64,
    z: Vec<Correction>,
    state: PureState,
    fidelity: f64,
}

enum Node {
    /// Homodyne of the next probe: `(outcome, conditional probability, subtree)`.
    Split(Vec<(ParityOutcome, f64, Node)>),
    Rejected,
    Accepted { corrections: Vec<Correction>, leaves: Vec<Leaf> },
}

struct Setup<'a> {
    circuit: Circuit,
    wiring: &'a Wiring,
    policy: &'a SelectionPolicy,
    target: &'a PureState,
}

/// Both copies on one registry, with all probes written and none read.
fn prepare(c1: &PureState, c2: &PureState, circuit: Circuit, wiring: &Wiring) -> Result<PureState> {
    let mut joint = c1.tensor(&wiring.second_copy(c2)?)?;
    if circuit == Circuit::Hadamard {
        joint = joint.apply_hadamard_all(joint.registry())?;
    }
    for (k, (kept, partner)) in wiring.probes().iter().enumerate() {
        joint = apply_pcg(&joint, kept, partner, ProbeId(k as u32 + 1))?;
    }
    Ok(joint)
}

fn grow(setup: &Setup, state: PureState, prefix: &mut Vec<ParityOutcome>) -> Result<Node> {
    let n = setup.wiring.probes().len();
    if prefix.len() == n {
        let pattern = ParityPattern(prefix.clone());
        let corrections = setup
            .policy
            .corrections(&pattern)
            .ok_or_else(|| Error::Internal(format!("reached unaccepted pattern {pattern}")))?
            .to_vec();
        let leaves = finish(setup, &state, &corrections)?;
        return Ok(Node::Accepted { corrections, leaves });
    }
    let probe = ProbeId(prefix.len() as u32 + 1);
    let mut children = Vec::with_capacity(2);
    for branch in homodyne(&state, probe)? {
        prefix.push(branch.outcome);
        let child = if setup.policy.accepts_prefix(prefix) {
            grow(setup, branch.state, prefix)?
        } else {
            Node::Rejected
        };
        prefix.pop();
        children.push((branch.outcome, branch.probability, child));
    }
    Ok(Node::Split(children))
}

/// Bit-flip feed-forward, `|±⟩` readout of copy 2, phase feed-forward, and the closing Hadamards.
fn finish(setup: &Setup, collapsed: &PureState, corrections: &[Correction]) -> Result<Vec<Leaf>> {
    let corrected = corrections.iter().try_fold(collapsed.clone(), |s, c| c.apply(&s))?;
    let kept = setup.wiring.kept();
    corrected
        .measure_diag(&setup.wiring.partners())?
        .into_iter()
        .map(|o| {
            let z: Vec<Correction> = kept
                .iter()
                .zip(&o.pattern)
                .filter(|(_, s)| **s == Sign::Minus)
                .map(|(k, _)| Correction::z(k.clone()))
                .collect();
            let mut state = z.iter().try_fold(o.state, |s, c| c.apply(&s))?;
            if setup.circuit == Circuit::Hadamard {
                state = state.apply_hadamard_all(&kept)?;
            }
            let fidelity = state.fidelity_pure(setup.target)?;
            Ok(Leaf { measurement: o.pattern, probability: o.probability, z, state, fidelity })
        })
        .collect()
}

struct Outcome<'t> {
    pattern: ParityPattern,
    corrections: Vec<Correction>,
    probability: f64,
    leaf: &'t Leaf,
}

/// Depth-first flattening; leaf order matches [`sample`]'s numbering.
fn flatten<'t>(node: &'t Node, p: f64, prefix: &mut Vec<ParityOutcome>, out: &mut Vec<Outcome<'t>>) {
    match node {
        Node::Split(children) => {
            for (o, q, child) in children {
                prefix.push(*o);
                flatten(child, p * q, prefix, out);
                prefix.pop();
            }
        }
        Node::Rejected => {}
        Node::Accepted { corrections, leaves } => {
            for leaf in leaves {
                let mut all = corrections.clone();
                all.extend(leaf.z.iter().cloned());
                out.push(Outcome {
                    pattern: ParityPattern(prefix.clone()),
                    corrections: all,
                    probability: p * leaf.probability,
                    leaf,
                });
            }
        }
    }
}

fn count_leaves(node: &Node) -> usize {
    match node {
        Node::Split(children) => children.iter().map(|(_, _, c)| count_leaves(c)).sum(),
        Node::Rejected => 0,
        Node::Accepted { leaves, .. } => leaves.len(),
    }
}

fn pick(u: f64, weights: impl Iterator<Item = f64>) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Walks one trajectory; returns the index of the leaf reached (in [`flatten`] order).
fn sample(node: &Node, rng: &mut ChaCha8Rng) -> Option<usize> {
    let mut node = node;
    let mut offset = 0;
    loop {
        match node {
            Node::Split(children) => {
                let i = pick(rng.random::<f64>(), children.iter().map(|c| c.1));
                offset += children[..i].iter().map(|(_, _, c)| count_leaves(c)).sum::<usize>();
                node = &children[i].2;
            }
            Node::Rejected => return None,
            Node::Accepted { leaves, .. } => {
                return Some(offset + pick(rng.random::<f64>(), leaves.iter().map(|l| l.probability)));
            }
        }
    }
}

fn check_input(input: &MixedState, kind: ErrorKind, m: usize) -> Result<(PureState, PureState)> {
    let target = PureState::logic_bell(LogicKind::PhiPlus, m)?;
    let error = kind.error_state(m)?;
    if input.registry() != target.registry() {
        return Err(Error::MalformedMixture(format!(
            "input lives on {:?}, expected the default m = {m} registry",
            input.registry().iter().map(|l| l.to_string()).collect::<Vec<_>>()
        )));
    }
    for (w, s) in input.components() {
        if !s.eq_up_to_phase(&target, MERGE_TOL) && !s.eq_up_to_phase(&error, MERGE_TOL) {
            return Err(Error::MalformedMixture(format!(
                "component with weight {w} is neither Phi+ nor the {kind} error state"
            )));
        }
    }
    Ok((target, error))
}

/// One distillation round on two copies of `input`.
pub fn distill_round(
    input: &MixedState,
    kind: ErrorKind,
    m: usize,
    policy: &SelectionPolicy,
    mode: ExecMode,
) -> Result<RoundResult> {
    let circuit = Circuit::for_kind(kind)?;
    let wiring = Wiring::new(m)?;
    if policy.m() != m {
        let pattern = policy.patterns().next().map(|p| p.to_string()).unwrap_or_default();
        return Err(Error::PatternLength { pattern, expected: 2 * m, got: 2 * policy.m() });
    }
    let (target, _) = check_input(input, kind, m)?;
    let setup = Setup { circuit, wiring: &wiring, policy, target: &target };

    let comps = input.components();
    let pairs: Vec<(usize, usize)> =
        (0..comps.len()).flat_map(|i| (0..comps.len()).map(move |j| (i, j))).collect();
    let trees: Vec<Node> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let joint = prepare(&comps[i].1, &comps[j].1, circuit, &wiring)?;
            grow(&setup, joint, &mut Vec::new())
        })
        .collect::<Result<_>>()?;
    let outcomes: Vec<Vec<Outcome>> = trees
        .iter()
        .zip(&pairs)
        .map(|(tree, &(i, j))| {
            let mut out = Vec::new();
            flatten(tree, comps[i].0 * comps[j].0, &mut Vec::new(), &mut out);
            out
        })
        .collect();
    let input_fidelity = input.fidelity(&target)?;

    match mode {
        ExecMode::Exact => {
            let mut log = Vec::new();
            let mut weighted = Vec::new();
            for (outs, &(i, j)) in outcomes.iter().zip(&pairs) {
                for o in outs {
                    log.push(entry(i, j, o, o.probability));
                    weighted.push((o.probability, o.leaf.state.clone(), o.leaf.fidelity));
                }
            }
            summarize(weighted, log, input_fidelity, &target)
        }
        ExecMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidArgument("trials must be at least 1".into()));
            }
            let weights: Vec<f64> = comps.iter().map(|(w, _)| *w).collect();
            let draws: Vec<Option<(usize, usize)>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(t);
                    let i = pick(rng.random::<f64>(), weights.iter().copied());
                    let j = pick(rng.random::<f64>(), weights.iter().copied());
                    let pair = i * comps.len() + j;
                    sample(&trees[pair], &mut rng).map(|leaf| (pair, leaf))
                })
                .collect();
            let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            for d in draws.into_iter().flatten() {
                *counts.entry(d).or_default() += 1;
            }
            let accepted: u64 = counts.values().sum();
            if accepted == 0 {
                return Err(Error::NothingAccepted);
            }
            let mut log = Vec::new();
            let mut weighted = Vec::new();
            for (&(pair, leaf), &n) in &counts {
                let o = &outcomes[pair][leaf];
                let (i, j) = pairs[pair];
                let freq = n as f64 / trials as f64;
                log.push(entry(i, j, o, freq));
                weighted.push((freq, o.leaf.state.clone(), o.leaf.fidelity));
            }
            let p = accepted as f64 / trials as f64;
            let mut result = summarize(weighted, log, input_fidelity, &target)?;
            let f = result.output_fidelity;
            result.sampling = Some(SamplingStats {
                trials,
                accepted,
                seed,
                success_stderr: (p * (1.0 - p) / trials as f64).sqrt(),
                fidelity_stderr: (f * (1.0 - f) / accepted as f64).max(0.0).sqrt(),
            });
            Ok(result)
        }
    }
}

fn entry(i: usize, j: usize, o: &Outcome, probability: f64) -> LogEntry {
    LogEntry {
        components: vec![i, j],
        probe_pattern: o.pattern.clone(),
        measurement: o.leaf.measurement.clone(),
        corrections: o.corrections.clone(),
        probability,
    }
}

/// Normalizes accepted branches into the output ensemble and cross-checks its fidelity.
pub(super) fn summarize(
    weighted: Vec<(f64, PureState, f64)>,
    outcome_log: Vec<LogEntry>,
    input_fidelity: f64,
    target: &PureState,
) -> Result<RoundResult> {
    let p: f64 = weighted.iter().map(|(w, _, _)| w).sum();
    if p <= 0.0 {
        return Err(Error::NothingAccepted);
    }
    let logged: f64 = weighted.iter().map(|(w, _, f)| w * f).sum::<f64>() / p;
    let output = MixedState::new(weighted.into_iter().map(|(w, s, _)| (w / p, s)).collect())?.merged(MERGE_TOL);
    let output_fidelity = output.fidelity(target)?;
    if (output_fidelity - logged).abs() > 1e-10 {
        return Err(Error::Internal(format!(
            "output fidelity {output_fidelity} disagrees with branch log {logged}"
        )));
    }
    Ok(RoundResult {
        success_probability: p.min(1.0),
        output,
        outcome_log,
        input_fidelity,
        output_fidelity,
        sampling: None,
    })
}

/// Normalized state after the probes of the pair `(c1, c2)` read `pattern`,
/// before any feed-forward or `|±⟩` readout. `None` if the pattern cannot occur.
pub fn collapse(
    c1: &PureState,
    c2: &PureState,
    kind: ErrorKind,
    m: usize,
    pattern: &ParityPattern,
) -> Result<Option<PureState>> {
    let circuit = Circuit::for_kind(kind)?;
    let wiring = Wiring::new(m)?;
    if pattern.len() != 2 * m {
        return Err(Error::PatternLength { pattern: pattern.to_string(), expected: 2 * m, got: pattern.len() });
    }
    let mut state = prepare(c1, c2, circuit, &wiring)?;
    for (k, want) in pattern.0.iter().enumerate() {
        match homodyne(&state, ProbeId(k as u32 + 1))?.into_iter().find(|b| b.outcome == *want) {
            Some(b) => state = b.state,
            None => return Ok(None),
        }
    }
    Ok(Some(state))
}

#[derive(Clone, Debug, Serialize)]
pub struct RejectionCase {
    /// `"<copy 1> x <copy 2>"`.
    pub input: String,
    pub canonical: f64,
    pub extended: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RejectionReport {
    pub kind: ErrorKind,
    pub m: usize,
    pub cases: Vec<RejectionCase>,
}

/// Acceptance probability of pure two-copy inputs under both policies. Mixed
/// pairs (target with error) should never pass.
pub fn verify_rejection(kind: ErrorKind, m: usize) -> Result<RejectionReport> {
    let circuit = Circuit::for_kind(kind)?;
    let wiring = Wiring::new(m)?;
    let target = PureState::logic_bell(LogicKind::PhiPlus, m)?;
    let error = kind.error_state(m)?;
    let err_name = match kind {
        ErrorKind::LogicPhaseFlip => "Phi-",
        _ => "Psi+",
    };
    let policies = [SelectionPolicy::canonical(m)?, SelectionPolicy::extended(m)?];
    let inputs = [
        ("Phi+", &target, err_name, &error),
        (err_name, &error, "Phi+", &target),
        ("Phi+", &target, "Phi+", &target),
        (err_name, &error, err_name, &error),
    ];
    let mut cases = Vec::new();
    for (n1, c1, n2, c2) in inputs {
        let mut acc = [0.0; 2];
        for (slot, policy) in acc.iter_mut().zip(&policies) {
            let setup = Setup { circuit, wiring: &wiring, policy, target: &target };
            let tree = grow(&setup, prepare(c1, c2, circuit, &wiring)?, &mut Vec::new())?;
            let mut out = Vec::new();
            flatten(&tree, 1.0, &mut Vec::new(), &mut out);
            *slot = out.iter().fold(0.0, |s, o| s + o.probability);
        }
        cases.push(RejectionCase { input: format!("{n1} x {n2}"), canonical: acc[0], extended: acc[1] });
    }
    Ok(RejectionReport { kind, m, cases })
}
