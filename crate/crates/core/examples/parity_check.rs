//! Cross-Kerr parity check: couple two photons to a probe, then read it by
//! X-homodyne detection, which sees only the size of the phase shift.

use cghz::qnd::{apply_pcg, homodyne, parity_check, ProbeId};
use cghz::state::{modes, BellKind, PureState};
use num_complex::Complex64;

fn main() -> cghz::Result<()> {
    let m = modes(&["a1", "a3"]);
    let h = Complex64::new(0.5, 0.0);
    let plus_plus = PureState::from_kets(&m, [("HH", h), ("HV", h), ("VH", h), ("VV", h)])?;

    let tagged = apply_pcg(&plus_plus, &m[0], &m[1], ProbeId(1))?;
    println!("after the gate, with probe tags:");
    for (ket, tags, a) in tagged.terms() {
        println!("  {a:.3} |{ket}> probe phase {:+}", tags[0]);
    }

    println!("\nhomodyne readout:");
    for b in homodyne(&tagged, ProbeId(1))? {
        println!("  {} with p = {:.3}: {}", b.outcome, b.probability, b.state);
    }

    // an even-parity input passes untouched
    let phi = PureState::bell(BellKind::PhiPlus, &m)?;
    let out = parity_check(&phi, &m[0], &m[1])?;
    println!("\nphi+ reads {} with p = {}, state unchanged: {}", out[0].outcome, out[0].probability, out[0].state.approx_eq(&phi, 1e-12));
    Ok(())
}
