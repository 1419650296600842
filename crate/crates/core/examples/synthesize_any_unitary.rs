// Synthesize random unitaries for both schemes and check the built
// circuits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use timebin::circuits::{GateSettings, Scheme};
use timebin::linear::haar_random;
use timebin::synthesis::{synthesize, verify_settings, TargetUnitary};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..5 {
        let u = TargetUnitary::new(haar_random(&mut rng)).unwrap();
        println!("target {i}:\n{}", u.matrix());
        for scheme in [Scheme::DualRail, Scheme::Polarization] {
            let settings = synthesize(&u, scheme);
            let f = verify_settings(&settings, &u).unwrap();
            match settings {
                GateSettings::DualRail(d) => println!(
                    "  dualrail     eta {:.4} theta1 {:+.4} theta2 {:+.4} gamma {:+.4}  F = {f:.12}",
                    d.eta, d.theta1, d.theta2, d.gamma
                ),
                GateSettings::Polarization(_) => println!("  polarization F = {f:.12}"),
            }
        }
    }
}
