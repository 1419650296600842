// A NOT gate built from the polarization scheme, applied to both basis
// bins and to a superposition.

use timebin::circuits::{polarization_gate, prepare_timebin, source_state, BuildOptions};
use timebin::linear::{NamedGate, PhotonState};
use timebin::synthesis::{synth_polarization, TargetUnitary};

fn main() {
    let x = TargetUnitary::new(NamedGate::X.matrix()).unwrap();
    let settings = synth_polarization(&x);
    println!("controller Jones matrix:\n{}", settings.jones);

    let gate = polarization_gate(&settings, &BuildOptions::ideal()).unwrap();
    let [s, l] = gate.outputs();
    for (name, input) in [("s", &gate.inputs()[0]), ("l", &gate.inputs()[1])] {
        let out = gate.run(&PhotonState::single(input.clone())).unwrap();
        println!("|{name}> -> P(s) = {:.3}, P(l) = {:.3}", out.probability(s), out.probability(l));
    }

    let prep = prepare_timebin(0.6, 0.0, &BuildOptions::ideal()).unwrap();
    let out = prep.then(&gate).unwrap().run(&source_state()).unwrap();
    println!("0.6|s> + 0.8|l> -> P(s) = {:.3}, P(l) = {:.3}", out.probability(s), out.probability(l));

    // with the default 1.5 dB switches
    let lossy = polarization_gate(&settings, &BuildOptions::default()).unwrap();
    println!("effective map with lossy switches:\n{}", lossy.effective_qubit_map().unwrap());
}
