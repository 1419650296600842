//! Figures of merit and engineering budgets: gate fidelity, insertion-loss
//! budgets, timing and thermal calculators, Monte-Carlo tolerance sweeps.

mod budget;
mod fidelity;
mod sweep;
mod thermal;

pub use budget::{loss_budget, LossBudget};
pub use fidelity::fidelity_up_to_phase;
pub use sweep::{monte_carlo_sweep, SampleResult, Summary, TolerancePolicy, ToleranceReport};
pub use thermal::{path_length_difference, thermal_phase_drift, BinSeparation, ThermalDrift, ThermalModel, SPEED_OF_LIGHT};
