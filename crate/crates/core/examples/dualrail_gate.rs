// The dual-rail gate: phase shifters around a variable coupler. Sweeps the
// coupling ratio and prints the effective qubit map.

use std::f64::consts::FRAC_PI_2;

use timebin::circuits::{dualrail_gate, BuildOptions, DualRailSettings};

fn main() {
    for eta in [0.0, 0.25, 0.5, 1.0] {
        let settings = DualRailSettings { eta, theta1: FRAC_PI_2, theta2: FRAC_PI_2, gamma: 0.0 };
        let gate = dualrail_gate(&settings, &BuildOptions::ideal()).unwrap();
        let m = gate.effective_qubit_map().unwrap();
        println!("eta = {eta}\n{m}");
        assert!(m.approx_eq(&settings.matrix(), 1e-12));
    }
    let gate = dualrail_gate(&DualRailSettings::identity(), &BuildOptions::ideal()).unwrap();
    println!("stages:");
    for s in gate.stages() {
        println!("  {:<12} {:?}", s.label, s.kind);
    }
}
