//! Models of the fibre components used by the gates.
//!
//! Conventions, fixed for the whole library:
//!
//! * Variable coupler: `B(ω) = [[cos ω, i sin ω], [i sin ω, cos ω]]` with
//!   `ω = asin √η`, so `η` is the cross-coupled power fraction.
//! * Phase shifter: `e^{iθ}` on every mode of its path.
//! * Delay lines shift slots and carry no phase; interferometric phase lives
//!   in phase shifters only.
//! * Switch and PBSC leakage is coherent with phase 0. Power leaked by a PBSC
//!   into its unused port is not tracked as a mode; it shows up as norm loss.
//! * Insertion loss `L` dB multiplies amplitudes by `10^(-L/20)`; an
//!   extinction ratio of `E` dB leaks power `ε = 10^(-E/10)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linear::{BasisTag, Mode, ModeTransform, Polarization, QubitMatrix, TimeWindow, TransformBuilder};

/// Power-dB insertion loss to amplitude factor.
pub fn loss_amplitude(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 20.0)
}

/// Power-dB extinction ratio to leaked power fraction. Infinite extinction
/// leaks nothing.
pub fn leakage_power(extinction_db: f64) -> f64 {
    if extinction_db.is_infinite() {
        0.0
    } else {
        10f64.powf(-extinction_db / 10.0)
    }
}

fn check_loss(loss_db: f64) -> Result<()> {
    if loss_db.is_nan() || loss_db < 0.0 {
        return Err(Error::InvalidInput(format!("insertion loss must be >= 0 dB, got {loss_db}")));
    }
    Ok(())
}

fn check_extinction(extinction_db: f64) -> Result<()> {
    if extinction_db.is_nan() || extinction_db <= 0.0 {
        return Err(Error::InvalidInput(format!("extinction ratio must be > 0 dB, got {extinction_db}")));
    }
    Ok(())
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `B(ω)`, the coupler matrix in the `(a, b)` path basis.
pub fn coupler_matrix(omega: f64) -> QubitMatrix {
    let (s, c) = omega.sin_cos();
    QubitMatrix::from_rows(real(c), Complex64::new(0.0, s), Complex64::new(0.0, s), real(c)).with_basis(BasisTag::DualRail)
}

/// Coupling angle for a cross-coupled power fraction.
pub fn coupling_angle(eta: f64) -> f64 {
    eta.sqrt().asin()
}

/// Fused-fibre variable coupler between `path_a` and `path_b`, identical on
/// every slot and polarization.
pub fn variable_coupler(window: TimeWindow, path_a: &str, path_b: &str, eta: f64, loss_db: f64) -> Result<ModeTransform> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidRatio(eta));
    }
    check_loss(loss_db)?;
    let b = coupler_matrix(coupling_angle(eta)).scale(real(loss_amplitude(loss_db)));
    let mut t = TransformBuilder::new(loss_db == 0.0);
    for ma in window.modes_on(path_a) {
        let mb = ma.with_path(path_b);
        t.touch(&ma).touch(&mb);
        t.add(ma.clone(), &ma, b.m[0][0]).add(mb.clone(), &ma, b.m[1][0]);
        t.add(ma.clone(), &mb, b.m[0][1]).add(mb.clone(), &mb, b.m[1][1]);
    }
    Ok(t.build())
}

pub fn phase_shifter(window: TimeWindow, path: &str, theta: f64, loss_db: f64) -> Result<ModeTransform> {
    check_loss(loss_db)?;
    let f = Complex64::from_polar(loss_amplitude(loss_db), theta);
    let mut t = TransformBuilder::new(loss_db == 0.0);
    for m in window.modes_on(path) {
        t.add(m.clone(), &m, f);
    }
    Ok(t.build())
}

/// Fibre delay of `k` slots. Modes pushed past the window are marked as
/// overflowing, so applying the delay to them fails.
pub fn delay(window: TimeWindow, path: &str, k: u32, loss_db: f64) -> Result<ModeTransform> {
    check_loss(loss_db)?;
    let f = real(loss_amplitude(loss_db));
    let mut t = TransformBuilder::new(loss_db == 0.0);
    for m in window.modes_on(path) {
        let shifted = i64::from(m.slot) + i64::from(k);
        match window.check(path, shifted) {
            Ok(slot) => {
                t.add(Mode::new(path, slot, m.pol), &m, f);
            }
            Err(_) => {
                t.overflow(&m, shifted, window);
            }
        }
    }
    Ok(t.build())
}

/// Output port of a 1×2 switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    A,
    B,
}

impl Port {
    pub fn other(self) -> Port {
        match self {
            Port::A => Port::B,
            Port::B => Port::A,
        }
    }
}

/// Switch state per time slot, total over the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteTable {
    routes: Vec<Port>,
}

impl RouteTable {
    pub fn new(window: TimeWindow, routes: Vec<Port>) -> Result<Self> {
        if routes.len() != window.slots() as usize {
            return Err(Error::InvalidInput(format!(
                "route table has {} entries, window has {} slots",
                routes.len(),
                window.slots()
            )));
        }
        Ok(RouteTable { routes })
    }

    pub fn from_fn(window: TimeWindow, f: impl Fn(u32) -> Port) -> Self {
        RouteTable { routes: window.iter().map(f).collect() }
    }

    /// `slot` goes to port A, every other slot to port B.
    pub fn single(window: TimeWindow, slot: u32) -> Self {
        Self::from_fn(window, |t| if t == slot { Port::A } else { Port::B })
    }

    pub fn route(&self, slot: u32) -> Port {
        self.routes[slot as usize]
    }
}

/// Output fibres of a routing element start empty: anything already on
/// them is not part of the element's input and is dropped. This keeps every
/// component a contraction on the full mode space.
fn absorb(t: &mut TransformBuilder, window: TimeWindow, paths: &[&str]) {
    for p in paths {
        for m in window.modes_on(p) {
            t.touch(&m);
        }
    }
}

/// Transmission amplitudes `(routed, leaked)` of a switch pass.
fn switch_amplitudes(loss_db: f64, extinction_db: f64) -> (f64, f64) {
    let eps = leakage_power(extinction_db);
    let f = loss_amplitude(loss_db);
    ((1.0 - eps).sqrt() * f, eps.sqrt() * f)
}

/// Fast 1×2 switch: each slot on `input` goes to the port chosen by
/// `routes`, with power `ε` leaking into the other port.
pub fn switch(
    window: TimeWindow,
    input: &str,
    out_a: &str,
    out_b: &str,
    routes: &RouteTable,
    loss_db: f64,
    extinction_db: f64,
) -> Result<ModeTransform> {
    check_loss(loss_db)?;
    check_extinction(extinction_db)?;
    let (pass, leak) = switch_amplitudes(loss_db, extinction_db);
    let mut t = TransformBuilder::new(loss_db == 0.0 && leak == 0.0);
    absorb(&mut t, window, &[out_a, out_b]);
    for m in window.modes_on(input) {
        let (to, away) = match routes.route(m.slot) {
            Port::A => (out_a, out_b),
            Port::B => (out_b, out_a),
        };
        t.touch(&m);
        t.add(m.with_path(to), &m, real(pass)).add(m.with_path(away), &m, real(leak));
    }
    Ok(t.build())
}

/// The same switch run backwards as a 2×1 combiner: the transpose of
/// [`switch`] with identical routes.
pub fn combiner(
    window: TimeWindow,
    in_a: &str,
    in_b: &str,
    output: &str,
    routes: &RouteTable,
    loss_db: f64,
    extinction_db: f64,
) -> Result<ModeTransform> {
    check_loss(loss_db)?;
    check_extinction(extinction_db)?;
    let (pass, leak) = switch_amplitudes(loss_db, extinction_db);
    let mut t = TransformBuilder::new(loss_db == 0.0 && leak == 0.0);
    absorb(&mut t, window, &[output]);
    for m in window.modes_on(output) {
        let (from, other) = match routes.route(m.slot) {
            Port::A => (in_a, in_b),
            Port::B => (in_b, in_a),
        };
        let (src, alt) = (m.with_path(from), m.with_path(other));
        t.touch(&src).touch(&alt);
        t.add(m.clone(), &src, real(pass)).add(m.clone(), &alt, real(leak));
    }
    Ok(t.build())
}

/// Polarizing beam combiner: H from `path_a` (transmitted) and V from
/// `path_b` (reflected) exit on `output`. The wrong polarization on either
/// input leaks with amplitude `√ε`; the rest is discarded.
pub fn pbsc_combine(
    window: TimeWindow,
    path_a: &str,
    path_b: &str,
    output: &str,
    loss_db: f64,
    extinction_db: f64,
) -> Result<ModeTransform> {
    check_loss(loss_db)?;
    check_extinction(extinction_db)?;
    let (pass, leak) = switch_amplitudes(loss_db, extinction_db);
    let mut t = TransformBuilder::new(loss_db == 0.0 && leak == 0.0);
    absorb(&mut t, window, &[output]);
    for slot in window.iter() {
        let a_h = Mode::h(path_a, slot);
        let a_v = Mode::v(path_a, slot);
        let b_h = Mode::h(path_b, slot);
        let b_v = Mode::v(path_b, slot);
        t.touch(&a_h).touch(&a_v).touch(&b_h).touch(&b_v);
        t.add(Mode::h(output, slot), &a_h, real(pass)).add(Mode::h(output, slot), &b_h, real(leak));
        t.add(Mode::v(output, slot), &b_v, real(pass)).add(Mode::v(output, slot), &a_v, real(leak));
    }
    Ok(t.build())
}

/// Polarizing beam splitter: transpose of [`pbsc_combine`]. H on `input`
/// goes to `path_a`, V to `path_b`.
pub fn pbsc_split(
    window: TimeWindow,
    input: &str,
    path_a: &str,
    path_b: &str,
    loss_db: f64,
    extinction_db: f64,
) -> Result<ModeTransform> {
    check_loss(loss_db)?;
    check_extinction(extinction_db)?;
    let (pass, leak) = switch_amplitudes(loss_db, extinction_db);
    let mut t = TransformBuilder::new(loss_db == 0.0 && leak == 0.0);
    absorb(&mut t, window, &[path_a, path_b]);
    for slot in window.iter() {
        let h = Mode::h(input, slot);
        let v = Mode::v(input, slot);
        t.touch(&h).touch(&v);
        t.add(Mode::h(path_a, slot), &h, real(pass)).add(Mode::h(path_b, slot), &h, real(leak));
        t.add(Mode::v(path_b, slot), &v, real(pass)).add(Mode::v(path_a, slot), &v, real(leak));
    }
    Ok(t.build())
}

/// Applies a Jones matrix (in `(H, V)` order) on every slot of `path`.
pub fn polarization_controller(window: TimeWindow, path: &str, jones: &QubitMatrix, loss_db: f64) -> Result<ModeTransform> {
    let residual = jones.unitarity_residual();
    if residual > 1e-10 {
        return Err(Error::NotUnitary(residual));
    }
    check_loss(loss_db)?;
    let j = jones.scale(real(loss_amplitude(loss_db)));
    let mut t = TransformBuilder::new(loss_db == 0.0);
    for slot in window.iter() {
        for pin in Polarization::BOTH {
            let input = Mode::new(path, slot, pin);
            t.touch(&input);
            for pout in Polarization::BOTH {
                t.add(Mode::new(path, slot, pout), &input, j.m[pout.index()][pin.index()]);
            }
        }
    }
    Ok(t.build())
}
