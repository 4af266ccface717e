//! Exact simulation of logic-qubit entanglement distillation.
//!
//! Logic qubits are m-photon polarization GHZ states; two of them form a
//! concatenated-GHZ (logic Bell) pair. Distillation runs on two noisy copies
//! with idealized cross-Kerr parity checks between the copies, post-selects
//! on the probe readings, measures the second copy in the `|±⟩` basis and
//! applies feed-forward.
//!
//! - [`state`]: sparse pure states, gates, `|±⟩` measurements, canonical constructors.
//! - [`qnd`]: parity-check gates and homodyne readout.
//! - [`channels`]: noisy ensembles, error kinds, fidelities, density matrices.
//! - [`protocols`]: the distillation round, physical bit-flip correction, selection policies.
//! - [`analytics`]: closed-form maps, iteration and exact-vs-formula reports.
//! - [`cli`]: the `cghz` command-line front end.

pub mod analytics;
pub mod channels;
pub mod cli;
pub mod error;
pub mod protocols;
pub mod qnd;
pub mod state;

pub use error::{Error, Result};
