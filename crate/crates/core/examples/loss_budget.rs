// Loss budgets for both gates with default switches, and with a lossier
// output switch.

use timebin::analysis::loss_budget;
use timebin::circuits::{build_gate, BuildOptions, GateSettings, Imperfections, Scheme, StageImperfection};

fn main() {
    for scheme in [Scheme::Polarization, Scheme::DualRail] {
        let gate = build_gate(&GateSettings::identity(scheme), &BuildOptions::default()).unwrap();
        println!("{}\n{}\n", scheme.name(), loss_budget(&gate).unwrap());
    }

    let imp = Imperfections::default().with_stage("sw_out", StageImperfection { loss_db: Some(2.5), ..Default::default() });
    let gate = build_gate(&GateSettings::identity(Scheme::DualRail), &BuildOptions::with_imperfections(imp)).unwrap();
    println!("dualrail, 2.5 dB output switch\n{}", loss_budget(&gate).unwrap());
}
