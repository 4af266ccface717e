//! Repeated rounds drive the fidelity towards 1 at a shrinking yield.

use cghz::analytics::iterate;
use cghz::channels::ErrorKind;
use cghz::protocols::PolicyKind;

fn main() -> cghz::Result<()> {
    for policy in [PolicyKind::Canonical, PolicyKind::Extended] {
        let t = iterate(0.6, 5, 2, ErrorKind::LogicBitFlip, policy)?;
        println!("{policy}:");
        for (i, f) in t.f_sequence.iter().enumerate() {
            let p = t.success_probs.get(i).map_or(String::new(), |p| format!("  next round succeeds with p = {p:.6}"));
            println!("  round {i}: F = {f:.12}{p}");
        }
        println!("  pairs left per input pair: {:.3e}\n", t.expected_yield);
    }
    if let Err(e) = iterate(0.5, 3, 2, ErrorKind::LogicBitFlip, PolicyKind::Canonical) {
        println!("F0 = 0.5: {e}");
    }
    Ok(())
}
