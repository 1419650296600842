// Prepare `α|s⟩ + e^{iφ}√(1−α²)|l⟩` and print the output amplitudes.

use std::f64::consts::FRAC_PI_3;

use timebin::circuits::{prepare_timebin, source_state, BuildOptions};

fn main() {
    let (alpha, phi) = (0.8, FRAC_PI_3);
    let circuit = prepare_timebin(alpha, phi, &BuildOptions::ideal()).expect("valid amplitude");
    let out = circuit.run(&source_state()).expect("fits the window");
    println!("alpha = {alpha}, phi = {phi:.4}");
    for (mode, a) in out.iter() {
        println!("{mode:<10} {:+.6} {:+.6}i  |a|^2 = {:.6}  arg = {:+.4}", a.re, a.im, a.norm_sqr(), a.arg());
    }
}
