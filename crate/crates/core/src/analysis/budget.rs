use std::fmt;

use crate::circuits::{CircuitSpec, StageKind};
use crate::error::Result;
use crate::linear::PhotonState;

#[derive(Debug, Clone, PartialEq)]
pub struct LossBudget {
    pub stages: Vec<(String, f64)>,
    pub total_db: f64,
    /// `10^(−total/10)`
    pub survival: f64,
    /// Mean transmitted probability of the two basis inputs, from simulation.
    pub simulated_survival: f64,
}

/// Itemizes the configured insertion loss of every stage and cross-checks
/// the product against the simulated transmission.
///
/// The itemized total assumes the photon passes every stage; for stages
/// sitting on one arm only, `simulated_survival` is the number to trust.
pub fn loss_budget(circuit: &CircuitSpec) -> Result<LossBudget> {
    let stages: Vec<(String, f64)> = circuit
        .stages()
        .iter()
        .filter(|s| s.kind != StageKind::Relabel)
        .map(|s| (s.label.clone(), s.loss_db))
        .collect();
    let total_db: f64 = stages.iter().map(|(_, db)| db).sum();
    let mut transmitted = 0.0;
    for m in circuit.inputs() {
        transmitted += circuit.run(&PhotonState::single(m.clone()))?.total_probability();
    }
    Ok(LossBudget {
        stages,
        total_db,
        survival: 10f64.powf(-total_db / 10.0),
        simulated_survival: transmitted / circuit.inputs().len() as f64,
    })
}

impl fmt::Display for LossBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<20} {:>8}", "stage", "loss_dB")?;
        for (label, db) in &self.stages {
            writeln!(f, "{:<20} {:>8.2}", label, db)?;
        }
        writeln!(f, "{:<20} {:>8.2}", "total", self.total_db)?;
        writeln!(f, "survival {:.6}", self.survival)?;
        write!(f, "simulated_survival {:.6}", self.simulated_survival)
    }
}
