//! Seeded sampling of measurement records against the exact branch sum.

use cghz::channels::{make_mixture, ErrorKind};
use cghz::protocols::{distill_round, ExecMode, SelectionPolicy};

fn main() -> cghz::Result<()> {
    let kind = ErrorKind::LogicBitFlip;
    let input = make_mixture(kind, 0.7, 2)?;
    let policy = SelectionPolicy::canonical(2)?;
    let exact = distill_round(&input, kind, 2, &policy, ExecMode::Exact)?;
    println!("exact:   p = {:.6}  F' = {:.6}", exact.success_probability, exact.output_fidelity);
    for seed in [1, 2, 3] {
        let mc = distill_round(&input, kind, 2, &policy, ExecMode::MonteCarlo { trials: 100_000, seed })?;
        let s = mc.sampling.expect("sampled run");
        println!(
            "seed {seed}: p = {:.6} ± {:.6}  F' = {:.6} ± {:.6}  ({} of {} accepted)",
            mc.success_probability, s.success_stderr, mc.output_fidelity, s.fidelity_stderr, s.accepted, s.trials
        );
    }
    Ok(())
}
