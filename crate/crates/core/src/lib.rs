//! Single-photon linear-optics simulation and gate synthesis for time-bin
//! qubits in optical fibre.
//!
//! A photon is tracked as a sparse amplitude vector over modes
//! `(path, time slot, polarization)`. Fibre components (couplers, phase
//! shifters, delays, fast switches, polarizing beam splitters and
//! polarization controllers) are linear maps on that space. On top of them
//! the crate builds a time-bin source and two gates that realize an arbitrary
//! single-qubit unitary on a time-bin qubit:
//!
//! * the polarization gate converts `(|s⟩, |l⟩)` into a polarization qubit,
//!   rotates it with a polarization controller, and converts back;
//! * the dual-rail gate converts into a path qubit and processes it with a
//!   phase shifter, a variable coupler and a second phase shifter.
//!
//! [`synthesis`] turns any target unitary into settings for either gate;
//! [`analysis`] scores gates and estimates loss, timing and thermal budgets.
//!
//! ```
//! use timebin::circuits::{dualrail_gate, BuildOptions};
//! use timebin::linear::NamedGate;
//! use timebin::synthesis::{synth_dualrail, TargetUnitary};
//! use timebin::analysis::fidelity_up_to_phase;
//!
//! let h = TargetUnitary::new(NamedGate::H.matrix()).unwrap();
//! let settings = synth_dualrail(&h);
//! let gate = dualrail_gate(&settings, &BuildOptions::ideal()).unwrap();
//! let map = gate.effective_qubit_map().unwrap();
//! assert!(fidelity_up_to_phase(h.matrix(), &map).unwrap() > 1.0 - 1e-12);
//! ```

pub mod analysis;
pub mod circuits;
pub mod cli;
pub mod components;
pub mod error;
pub mod io;
pub mod linear;
pub mod synthesis;

pub use error::{Error, Result};
