//! One round of logic bit-flip distillation on two copies of
//! F|Phi+><Phi+| + (1-F)|Psi+><Psi+|.

use cghz::analytics::fidelity_map;
use cghz::channels::{make_mixture, ErrorKind};
use cghz::protocols::{distill_round, ExecMode, SelectionPolicy};

fn main() -> cghz::Result<()> {
    let kind = ErrorKind::LogicBitFlip;
    let m = 2;
    for policy in [SelectionPolicy::canonical(m)?, SelectionPolicy::extended(m)?] {
        println!("policy {} accepts {:?}", policy.name(), policy.patterns().map(|p| p.to_string()).collect::<Vec<_>>());
        println!("{:>6} {:>12} {:>12} {:>10}", "F", "F' exact", "F'^2/S", "p");
        for f in [0.55, 0.6, 0.7, 0.8, 0.9] {
            let r = distill_round(&make_mixture(kind, f, m)?, kind, m, &policy, ExecMode::Exact)?;
            println!("{f:>6.2} {:>12.9} {:>12.9} {:>10.6}", r.output_fidelity, fidelity_map(f)?, r.success_probability);
        }
        println!();
    }

    let r = distill_round(&make_mixture(kind, 0.8, m)?, kind, m, &SelectionPolicy::canonical(m)?, ExecMode::Exact)?;
    println!("accepted branches at F = 0.8 (first few):");
    for e in r.outcome_log.iter().take(4) {
        let fixes: Vec<String> = e.corrections.iter().map(|c| c.to_string()).collect();
        println!("  inputs {:?} probes {} reads {:?} fixes [{}] p = {:.5}", e.components, e.probe_pattern, e.measurement, fixes.join(" "), e.probability);
    }
    Ok(())
}
