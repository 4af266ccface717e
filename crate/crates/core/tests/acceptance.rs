//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use cghz::channels::{density_matrix, make_mixture, ErrorKind};
use cghz::cli::OUTPUT_DIR_ENV;
use cghz::protocols::{
    collapse, correct_physical_bitflip, distill_round, verify_rejection, ExecMode, ParityPattern, PolicyKind,
    SelectionPolicy, Strategy,
};
use cghz::state::{default_modes, mode_range, LogicKind, PureState, Sign};
use common::{c, dense, hadamard_all, logic_amp, max_abs, outer, parity_projector, partial_trace, pm_projector, single, Logic};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const LOGIC_KINDS: [ErrorKind; 2] = [ErrorKind::LogicBitFlip, ErrorKind::LogicPhaseFlip];

fn grid() -> Vec<f64> {
    (11..=19).map(|i| i as f64 * 0.05).collect()
}

fn s(f: f64) -> f64 {
    f * f + (1.0 - f) * (1.0 - f)
}

fn run(input: &cghz::channels::MixedState, kind: ErrorKind, m: usize, policy: PolicyKind) -> cghz::Result<cghz::protocols::RoundResult> {
    distill_round(input, kind, m, &SelectionPolicy::of_kind(policy, m)?, ExecMode::Exact)
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{label} took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn fidelity_map() -> Verdict {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for kind in LOGIC_KINDS {
        for m in [2, 3] {
            for f in grid() {
                let r = run(&make_mixture(kind, f, m).map_err(|e| e.to_string())?, kind, m, PolicyKind::Canonical)
                    .map_err(|e| format!("{kind} m={m} F={f}: {e}"))?;
                worst = worst.max((r.output_fidelity - f * f / s(f)).abs());
            }
        }
    }
    within("grid", t.elapsed(), Duration::from_secs(5))?;
    if worst < 1e-10 {
        Ok(format!("max |F' - F²/S| = {worst:.1e} in {:.2?}", t.elapsed()))
    } else {
        Err(format!("max |F' - F²/S| = {worst:.1e}"))
    }
}

fn success_probability() -> Verdict {
    let mut bad = Vec::new();
    let mut cells = 0;
    for kind in LOGIC_KINDS {
        for m in [2, 3] {
            for f in grid() {
                let input = make_mixture(kind, f, m).map_err(|e| e.to_string())?;
                let canon = run(&input, kind, m, PolicyKind::Canonical).map_err(|e| e.to_string())?.success_probability;
                let ext = run(&input, kind, m, PolicyKind::Extended).map_err(|e| e.to_string())?.success_probability;
                cells += 1;
                let want = s(f) / 8.0;
                if (canon - want).abs() > 1e-10 {
                    bad.push(format!("{kind} m={m} F={f:.2}: canonical {canon:.6} vs {want:.6}"));
                }
                if (ext - 4.0 * canon).abs() > 1e-10 {
                    bad.push(format!("{kind} m={m} F={f:.2}: extended/canonical = {:.3}", ext / canon));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{cells} cells match S/8 and extended = 4x"))
    } else {
        Err(format!("{} mismatches in {cells} cells, first: {}", bad.len(), bad[..bad.len().min(3)].join("; ")))
    }
}

fn cross_term_rejection() -> Verdict {
    for kind in LOGIC_KINDS {
        for m in [2, 3] {
            let rep = verify_rejection(kind, m).map_err(|e| e.to_string())?;
            for case in &rep.cases[..2] {
                if case.canonical != 0.0 || case.extended != 0.0 {
                    return Err(format!("{kind} m={m} {}: {} / {}", case.input, case.canonical, case.extended));
                }
            }
        }
    }
    Ok("Phi+ x E and E x Phi+ accepted with probability exactly 0".into())
}

fn pattern_equivalence() -> Verdict {
    let policy = SelectionPolicy::extended(2).map_err(|e| e.to_string())?;
    let phi = PureState::logic_bell(LogicKind::PhiPlus, 2).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut absent = 0;
    for kind in LOGIC_KINDS {
        let err = kind.error_state(2).map_err(|e| e.to_string())?;
        for (c1, c2) in [(&phi, &phi), (&err, &err)] {
            let reference = collapse(c1, c2, kind, 2, &ParityPattern::all_even(4))
                .map_err(|e| e.to_string())?
                .ok_or("EEEE never occurs")?;
            for name in ["OOOO", "EEOO", "OOEE"] {
                let pattern = ParityPattern::from_interleaved(name).map_err(|e| e.to_string())?;
                let corrections = policy.corrections(&pattern).ok_or(format!("{name} not accepted"))?;
                // without the Hadamard layer both A probes (and both B probes) always agree
                let Some(state) = collapse(c1, c2, kind, 2, &pattern).map_err(|e| e.to_string())? else {
                    if kind == ErrorKind::LogicBitFlip {
                        return Err(format!("{kind}: {name} never occurs"));
                    }
                    absent += 1;
                    continue;
                };
                let fixed = corrections.iter().try_fold(state, |st, c| c.apply(&st)).map_err(|e| e.to_string())?;
                worst = worst.max(fixed.max_abs_diff(&reference).map_err(|e| e.to_string())?);
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("corrected OOOO/EEOO/OOEE equal EEEE, max diff {worst:.1e}; {absent} phase-flip cases have probability 0"))
    } else {
        Err(format!("max amplitude diff {worst:.1e}"))
    }
}

fn physical_correction() -> Verdict {
    let mut bad = Vec::new();
    let mut cells = 0;
    for m in 2..=4 {
        for j in 1..=m {
            for f in (0..=10).map(|i| i as f64 / 10.0) {
                let input = make_mixture(ErrorKind::PhysicalBitFlip(j), f, m).map_err(|e| e.to_string())?;
                for strategy in [Strategy::KnownLocation(j), Strategy::Localize] {
                    cells += 1;
                    match correct_physical_bitflip(&input, m, strategy) {
                        Ok(r) if (r.output_fidelity - 1.0).abs() < 1e-12 && (r.success_probability - 1.0).abs() < 1e-12 => {}
                        Ok(r) => bad.push(format!("m={m} j={j} F={f} {strategy:?}: F'={} p={}", r.output_fidelity, r.success_probability)),
                        Err(e) => bad.push(format!("m={m} j={j} F={f} {strategy:?}: {e}")),
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{cells} cells corrected completely"))
    } else {
        Err(format!("{} of {cells} cells incomplete, e.g. {}", bad.len(), bad[..bad.len().min(2)].join("; ")))
    }
}

fn error_equivalence() -> Verdict {
    let mut worst: f64 = 0.0;
    for j in 1..=2 {
        for f in (0..=10).map(|i| i as f64 / 10.0) {
            let a = density_matrix(&make_mixture(ErrorKind::PhysicalPhaseFlip(j), f, 2).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let b = density_matrix(&make_mixture(ErrorKind::LogicBitFlip, f, 2).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            worst = worst.max(max_abs(&(a - b)));
        }
    }
    if worst < 1e-12 {
        Ok(format!("phase flip on a1/a2 gives the logic bit-flip density, max diff {worst:.1e}"))
    } else {
        Err(format!("max density diff {worst:.1e}"))
    }
}

/// Brute-force m=2 round on 8 qubits: a1..a4 are 0..3, b1..b4 are 4..7,
/// copy 1 is {0,1,4,5}, copy 2 is {2,3,6,7}.
fn oracle_round(kind: ErrorKind, f: f64, extended: bool) -> (f64, DMatrix<C>) {
    let n = 8;
    let err = if kind == ErrorKind::LogicBitFlip { Logic::PsiPlus } else { Logic::PhiMinus };
    let hadamard = kind == ErrorKind::LogicBitFlip;
    let pair = |k1, k2| {
        DVector::from_fn(1 << n, |i, _| c(logic_amp(k1, i, &[0, 1], &[4, 5]) * logic_amp(k2, i, &[2, 3], &[6, 7])))
    };
    let probes = [(0, 2), (1, 3), (4, 6), (5, 7)];
    // probe order a1a3, a2a4, b1b3, b2b4; extended keeps the mirrored patterns
    let patterns: Vec<[bool; 4]> = if extended {
        vec![[true; 4], [true, false, true, false], [false, true, false, true], [false; 4]]
    } else {
        vec![[true; 4]]
    };
    let h_all = hadamard_all(n);
    let h_kept = common::product([0, 1, 4, 5].map(|q| single(n, q, common::H)), n);
    let mut rho = DMatrix::zeros(1 << n, 1 << n);
    for (w1, k1) in [(f, Logic::PhiPlus), (1.0 - f, err)] {
        for (w2, k2) in [(f, Logic::PhiPlus), (1.0 - f, err)] {
            let mut v = pair(k1, k2);
            if hadamard {
                v = &h_all * v;
            }
            for even in &patterns {
                let mut u = probes
                    .iter()
                    .zip(even)
                    .fold(v.clone(), |acc, (&(x, y), &e)| parity_projector(n, x, y, e) * acc);
                for (&(x, _), &e) in probes.iter().zip(even) {
                    if !e {
                        u = single(n, x, common::X) * u;
                    }
                }
                for signs in 0..16usize {
                    let mut b = u.clone();
                    for (i, &(x, y)) in probes.iter().enumerate() {
                        let minus = signs >> i & 1 == 1;
                        b = pm_projector(n, y, !minus) * b;
                        if minus {
                            b = single(n, x, common::Z) * b;
                        }
                    }
                    if hadamard {
                        b = &h_kept * b;
                    }
                    rho += outer(&b) * c(w1 * w2);
                }
            }
        }
    }
    let reduced = partial_trace(&rho, n, &[2, 3, 6, 7]);
    let p = reduced.trace().re;
    (p, reduced / c(p))
}

fn oracle_equivalence() -> Verdict {
    let mut worst_rho: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for kind in LOGIC_KINDS {
        for policy in [PolicyKind::Canonical, PolicyKind::Extended] {
            for f in [0.6, 0.8] {
                let r = run(&make_mixture(kind, f, 2).map_err(|e| e.to_string())?, kind, 2, policy).map_err(|e| e.to_string())?;
                let (p, rho) = oracle_round(kind, f, policy == PolicyKind::Extended);
                let got = density_matrix(&r.output).map_err(|e| e.to_string())?;
                worst_rho = worst_rho.max(max_abs(&(got - rho)));
                worst_p = worst_p.max((r.success_probability - p).abs());
            }
        }
    }
    if worst_rho < 1e-10 && worst_p < 1e-10 {
        Ok(format!("8-qubit dense pipeline agrees: density {worst_rho:.1e}, probability {worst_p:.1e}"))
    } else {
        Err(format!("density diff {worst_rho:.1e}, probability diff {worst_p:.1e}"))
    }
}

fn monte_carlo() -> Verdict {
    let t = Instant::now();
    let input = make_mixture(ErrorKind::LogicBitFlip, 0.7, 2).map_err(|e| e.to_string())?;
    let policy = SelectionPolicy::canonical(2).map_err(|e| e.to_string())?;
    let ex = distill_round(&input, ErrorKind::LogicBitFlip, 2, &policy, ExecMode::Exact).map_err(|e| e.to_string())?;
    let mc = distill_round(&input, ErrorKind::LogicBitFlip, 2, &policy, ExecMode::MonteCarlo { trials: 100_000, seed: 7 })
        .map_err(|e| e.to_string())?;
    within("100000 trials", t.elapsed(), Duration::from_secs(30))?;
    let stats = mc.sampling.ok_or("no sampling stats")?;
    let se_p = (ex.success_probability * (1.0 - ex.success_probability) / stats.trials as f64).sqrt();
    let se_f = (ex.output_fidelity * (1.0 - ex.output_fidelity) / stats.accepted as f64).sqrt();
    let zp = (mc.success_probability - ex.success_probability) / se_p;
    let zf = (mc.output_fidelity - ex.output_fidelity) / se_f;
    if zp.abs() < 4.0 && zf.abs() < 4.0 {
        Ok(format!("z(p) = {zp:+.2}, z(F) = {zf:+.2} in {:.2?}", t.elapsed()))
    } else {
        Err(format!("z(p) = {zp:+.2}, z(F) = {zf:+.2}"))
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let n = rng.random_range(1..=6usize);
        let kets: Vec<(String, C)> = (0..rng.random_range(1..=12))
            .map(|_| {
                let k = rng.random_range(0..1usize << n);
                let ket = (0..n).map(|i| if k >> i & 1 == 1 { 'V' } else { 'H' }).collect();
                (ket, C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            })
            .collect();
        if let Ok(s) = PureState::from_kets(&mode_range("m", 1, n), kets).and_then(|s| s.normalized()) {
            return s;
        }
    }
}

fn algebra() -> Verdict {
    let t = Instant::now();
    let e = |e: cghz::Error| e.to_string();
    for m in 2..=4 {
        let states: Vec<PureState> = LogicKind::ALL.iter().map(|k| PureState::logic_bell(*k, m)).collect::<Result<_, _>>().map_err(e)?;
        for (i, x) in states.iter().enumerate() {
            for (j, y) in states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (x.inner_product(y).map_err(e)? - c(want)).norm() > 1e-12 {
                    return Err(format!("Gram entry ({i},{j}) off at m={m}"));
                }
            }
        }
        let mut all = default_modes('a', m);
        all.extend(default_modes('b', m));
        if !states[0].approx_eq(&PureState::ghz(Sign::Plus, &all).map_err(e)?, 1e-12) {
            return Err(format!("C-GHZ collapse fails at m={m}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let st = random_state(&mut rng);
        let q = rng.random_range(0..st.num_modes());
        let mode = st.registry()[q].clone();
        for twice in [
            st.apply_hadamard(&mode).and_then(|s| s.apply_hadamard(&mode)),
            st.apply_x(&mode).and_then(|s| s.apply_x(&mode)),
            st.apply_z(&mode).and_then(|s| s.apply_z(&mode)),
        ] {
            if twice.map_err(e)?.max_abs_diff(&st).map_err(e)? > 1e-12 {
                return Err("gate is not an involution".into());
            }
        }
        let h = st.apply_hadamard(&mode).map_err(e)?;
        if common::vmax(&(dense(&h) - single(st.num_modes(), q, common::H) * dense(&st))) > 1e-12 {
            return Err("Hadamard disagrees with the dense oracle".into());
        }
        let chosen: Vec<_> = st.registry().iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
        if !chosen.is_empty() {
            let total: f64 = st.measure_diag(&chosen).map_err(e)?.iter().map(|o| o.probability).sum();
            if (total - 1.0).abs() > 1e-10 {
                return Err(format!("measurement probabilities sum to {total}"));
            }
        }
    }
    within("algebra suite", t.elapsed(), Duration::from_secs(10))?;
    Ok(format!("Gram, C-GHZ collapse, involutions, completeness on 500 random states in {:.2?}", t.elapsed()))
}

fn determinism() -> Verdict {
    let sweep = || {
        Command::new(env!("CARGO_BIN_EXE_cghz"))
            .args(["sweep", "--kind", "logic-bit", "--m", "2", "--grid", "0.55:0.95:0.05"])
            .env_remove(OUTPUT_DIR_ENV)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (sweep()?, sweep()?);
    if !a.status.success() {
        return Err(String::from_utf8_lossy(&a.stderr).into_owned());
    }
    if a.stdout == b.stdout {
        Ok(format!("two sweeps produced identical {} bytes", a.stdout.len()))
    } else {
        Err("sweep output differs between runs".into())
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fidelity map", fidelity_map),
        ("success probability", success_probability),
        ("cross-term rejection", cross_term_rejection),
        ("pattern equivalence", pattern_equivalence),
        ("physical bit-flip correction", physical_correction),
        ("phase-flip error equivalence", error_equivalence),
        ("dense oracle equivalence", oracle_equivalence),
        ("monte carlo consistency", monte_carlo),
        ("algebraic structure", algebra),
        ("sweep determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
