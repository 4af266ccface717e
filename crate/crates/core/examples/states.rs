//! Builds Bell, GHZ and logic Bell states and checks a few identities.

use cghz::state::{default_modes, modes, BellKind, LogicKind, PureState, Sign};

fn main() -> cghz::Result<()> {
    let pair = modes(&["a1", "a2"]);
    let phi = PureState::bell(BellKind::PhiPlus, &pair)?;
    println!("phi+ = {phi}");

    let ghz = PureState::ghz(Sign::Minus, &modes(&["a1", "a2", "a3"]))?;
    println!("ghz- = {ghz}");

    // logic qubits are GHZ states, so Phi+ on 2m photons is one big GHZ state
    for m in 2..=4 {
        let logic = PureState::logic_bell(LogicKind::PhiPlus, m)?;
        let mut all = default_modes('a', m);
        all.extend(default_modes('b', m));
        let big = PureState::ghz(Sign::Plus, &all)?;
        println!("m={m}: Phi+ == GHZ+ on {} photons: {}", 2 * m, logic.approx_eq(&big, 1e-12));
    }

    println!("\nlogic Bell basis at m=2:");
    for k in LogicKind::ALL {
        println!("  {k:<4} = {}", PureState::logic_bell(k, 2)?);
    }

    let psi = PureState::logic_bell(LogicKind::PsiPlus, 2)?;
    let fixed = psi.apply_z(&default_modes('a', 2)[0])?;
    println!("\nZ on a1 maps Psi+ to Phi+: {}", fixed.approx_eq(&PureState::logic_bell(LogicKind::PhiPlus, 2)?, 1e-12));
    Ok(())
}
