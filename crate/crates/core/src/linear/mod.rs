//! Mode bookkeeping, sparse single-photon states and linear mode transforms.
//!
//! Everything downstream (components, circuits, synthesis) is expressed with
//! the types in this module.

mod mode;
mod qubit;
mod state;
mod transform;

pub use mode::{Mode, Polarization, TimeWindow, MAX_PATHS};
pub use qubit::{haar_random, wrap_phase, BasisTag, NamedGate, QubitMatrix};
pub use state::PhotonState;
pub use transform::{compose, relabel, ModeTransform, TransformBuilder};

/// Amplitudes below this magnitude are dropped.
pub const PRUNE: f64 = 1e-15;

/// Default absolute tolerance for amplitude comparisons.
pub const TOL: f64 = 1e-12;
