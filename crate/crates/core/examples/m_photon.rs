//! Distillation with m photons per logic qubit: 2m parity checks per round.

use cghz::analytics::compare_exact_vs_formula;
use cghz::channels::ErrorKind;
use cghz::protocols::{PolicyKind, Wiring};

fn main() -> cghz::Result<()> {
    for m in [2, 3] {
        let w = Wiring::new(m)?;
        let pairs: Vec<String> = w.probes().iter().map(|(k, p)| format!("({k},{p})")).collect();
        println!("m={m}: probes {}", pairs.join(" "));
        let grid: Vec<f64> = (11..=19).map(|i| i as f64 * 0.05).collect();
        for kind in [ErrorKind::LogicBitFlip, ErrorKind::LogicPhaseFlip] {
            let rep = compare_exact_vs_formula(&grid, m, kind, PolicyKind::Canonical)?;
            println!(
                "  {kind}: max |F' - formula| = {:.1e}, max |p - formula| = {:.1e}, p at F=0.95 is {:.6}",
                rep.max_fidelity_diff,
                rep.max_probability_diff,
                rep.rows.last().map_or(0.0, |r| r.p_success_exact)
            );
        }
    }
    Ok(())
}
