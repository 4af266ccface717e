//! Single-photon bit flips inside a logic qubit are found by parity checks
//! between neighbouring photons and undone deterministically.

use cghz::channels::{make_mixture, ErrorKind};
use cghz::protocols::{correct_physical_bitflip, infer_flip, Strategy};
use cghz::qnd::ParityOutcome::{Even, Odd};

fn main() -> cghz::Result<()> {
    for m in 2..=4 {
        for j in 1..=m {
            let input = make_mixture(ErrorKind::PhysicalBitFlip(j), 0.3, m)?;
            let known = correct_physical_bitflip(&input, m, Strategy::KnownLocation(j))?;
            let sweep = match correct_physical_bitflip(&input, m, Strategy::Localize) {
                Ok(r) => format!("{:.12}", r.output_fidelity),
                Err(e) => format!("failed ({e})"),
            };
            println!("m={m} flip on a{j}: known location F' = {:.12}, localize F' = {sweep}", known.output_fidelity);
        }
    }

    // checks on (a1,a2), (a2,a3): an odd pair pins the flipped photon
    let m = 3;
    for checks in [[Odd, Even], [Odd, Odd], [Even, Odd], [Even, Even]] {
        println!("checks {checks:?} -> flipped photon {:?}", infer_flip(&checks, m));
    }
    Ok(())
}
