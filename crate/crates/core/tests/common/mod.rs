#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use timebin::components::{self, RouteTable};
use timebin::linear::{haar_random, Mode, ModeTransform, PhotonState, TimeWindow};

pub const PATHS: [&str; 3] = ["a", "b", "c"];

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random state on `modes` with total probability `norm`.
pub fn random_state<R: Rng>(rng: &mut R, modes: &[Mode], norm: f64) -> PhotonState {
    let amps: Vec<Complex64> = modes.iter().map(|_| gaussian_complex(rng)).collect();
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let k = (norm / total).sqrt();
    PhotonState::new(modes.iter().cloned().zip(amps.into_iter().map(|a| a * k))).unwrap()
}

/// A randomly chosen component with random parameters on paths a/b/c.
/// `lossy` enables insertion loss and finite extinction.
pub fn random_component<R: Rng>(rng: &mut R, window: TimeWindow, lossy: bool) -> (String, ModeTransform) {
    let p = |rng: &mut R| PATHS[rng.random_range(0..PATHS.len())];
    let two = |rng: &mut R| {
        let i = rng.random_range(0..3);
        let j = (i + rng.random_range(1..3)) % 3;
        (PATHS[i], PATHS[j], PATHS[3 - i - j])
    };
    let loss = |rng: &mut R| if lossy { rng.random_range(0.0..3.0) } else { 0.0 };
    let ext = |rng: &mut R| if lossy { rng.random_range(10.0..40.0) } else { f64::INFINITY };
    let routes = |rng: &mut R| RouteTable::single(window, rng.random_range(0..window.slots()));
    match rng.random_range(0..8) {
        0 => {
            let (a, b, _) = two(rng);
            ("coupler".into(), components::variable_coupler(window, a, b, rng.random(), loss(rng)).unwrap())
        }
        1 => ("phase".into(), components::phase_shifter(window, p(rng), rng.random_range(-4.0..4.0), loss(rng)).unwrap()),
        2 => ("delay".into(), components::delay(window, p(rng), rng.random_range(0..2), loss(rng)).unwrap()),
        3 => {
            let (i, a, b) = two(rng);
            let r = routes(rng);
            ("switch".into(), components::switch(window, i, a, b, &r, loss(rng), ext(rng)).unwrap())
        }
        4 => {
            let (a, b, o) = two(rng);
            let r = routes(rng);
            ("combiner".into(), components::combiner(window, a, b, o, &r, loss(rng), ext(rng)).unwrap())
        }
        5 => {
            let (a, b, o) = two(rng);
            ("pbsc_combine".into(), components::pbsc_combine(window, a, b, o, loss(rng), ext(rng)).unwrap())
        }
        6 => {
            let (i, a, b) = two(rng);
            ("pbsc_split".into(), components::pbsc_split(window, i, a, b, loss(rng), ext(rng)).unwrap())
        }
        _ => {
            let j = haar_random(rng);
            ("pc".into(), components::polarization_controller(window, p(rng), &j, loss(rng)).unwrap())
        }
    }
}

/// All modes on paths a/b/c inside the window.
pub fn all_modes(window: TimeWindow) -> Vec<Mode> {
    PATHS.iter().flat_map(|p| window.modes_on(p)).collect()
}
