// Monte-Carlo tolerance sweep of a Hadamard gate under phase noise,
// coupling error and switch loss spread.

use timebin::analysis::{monte_carlo_sweep, TolerancePolicy};
use timebin::circuits::{BuildOptions, Scheme};
use timebin::linear::NamedGate;
use timebin::synthesis::TargetUnitary;

fn main() {
    let h = TargetUnitary::new(NamedGate::H.matrix()).unwrap();
    let policy = TolerancePolicy {
        phase_std: 0.05,
        output_phase_std: 0.05,
        coupling_std: 0.01,
        loss_spread_db: 0.2,
        samples: 2000,
        seed: 1,
        ..Default::default()
    };
    for scheme in [Scheme::DualRail, Scheme::Polarization] {
        let report = monte_carlo_sweep(&h, scheme, &BuildOptions::default(), &policy).unwrap();
        println!("{report}\n");
    }
}
