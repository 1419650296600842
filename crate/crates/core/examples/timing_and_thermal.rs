// Arm imbalance against switch rate, and the thermal drift it implies.

use timebin::analysis::{path_length_difference, thermal_phase_drift, BinSeparation, ThermalModel};

fn main() {
    let model = ThermalModel::default();
    println!("{:>10} {:>10} {:>12} {:>12}", "rate_GHz", "dL_cm", "dphi_rad", "penalty");
    for ghz in [1.0, 5.0, 10.0, 20.0, 40.0] {
        let dl = path_length_difference(BinSeparation::Rate(ghz * 1e9), &model).unwrap();
        let drift = thermal_phase_drift(dl, 0.1, &model).unwrap();
        println!("{ghz:>10.1} {:>10.3} {:>12.5} {:>12.3e}", dl * 100.0, drift.phase, drift.fidelity_penalty);
    }

    let dl = path_length_difference(BinSeparation::Rate(10e9), &model).unwrap();
    println!("\nat 10 GHz, temperature excursion for a given penalty:");
    for dt in [0.01, 0.1, 0.5, 1.0] {
        let d = thermal_phase_drift(dl, dt, &model).unwrap();
        println!("  dT = {dt:<5} K  dphi = {:.4} rad  fidelity >= {:.5}", d.phase, 1.0 - d.fidelity_penalty);
    }
}
