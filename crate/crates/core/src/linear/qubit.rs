use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Which pair of modes the rows and columns of a [`QubitMatrix`] refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisTag {
    /// `(|s⟩, |l⟩)`: early bin first.
    #[default]
    TimeBin,
    /// `(|1⟩_u|0⟩_l, |0⟩_u|1⟩_l)`: upper rail first.
    DualRail,
    /// `(|H⟩, |V⟩)`.
    Polarization,
}

/// A 2×2 complex matrix acting on one qubit basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitMatrix {
    pub m: [[Complex64; 2]; 2],
    pub basis: BasisTag,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

impl QubitMatrix {
    pub fn new(m: [[Complex64; 2]; 2], basis: BasisTag) -> Self {
        QubitMatrix { m, basis }
    }

    pub fn from_rows(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Self {
        QubitMatrix::new([[a, b], [cc, d]], BasisTag::TimeBin)
    }

    pub fn identity() -> Self {
        Self::from_rows(ONE, ZERO, ZERO, ONE)
    }

    pub fn zeros() -> Self {
        Self::from_rows(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn pauli_x() -> Self {
        Self::from_rows(ZERO, ONE, ONE, ZERO)
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(ZERO, -I, I, ZERO)
    }

    pub fn pauli_z() -> Self {
        Self::from_rows(ONE, ZERO, ZERO, -ONE)
    }

    pub fn hadamard() -> Self {
        let h = c(FRAC_1_SQRT_2, 0.0);
        Self::from_rows(h, h, h, -h)
    }

    /// `diag(e^{iθ}, 1)`: phase on the first basis vector.
    pub fn phase_first(theta: f64) -> Self {
        Self::from_rows(Complex64::from_polar(1.0, theta), ZERO, ZERO, ONE)
    }

    pub fn with_basis(mut self, basis: BasisTag) -> Self {
        self.basis = basis;
        self
    }

    /// Row-major `[re00, im00, re01, im01, re10, im10, re11, im11]`.
    pub fn from_reals(r: [f64; 8], basis: BasisTag) -> Self {
        QubitMatrix::new([[c(r[0], r[1]), c(r[2], r[3])], [c(r[4], r[5]), c(r[6], r[7])]], basis)
    }

    pub fn to_reals(&self) -> [f64; 8] {
        let m = &self.m;
        [m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        QubitMatrix::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]], self.basis)
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let m = &self.m;
        QubitMatrix::new([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]], self.basis)
    }

    /// Squared norm of column `j`, i.e. the transmitted probability of basis
    /// input `j`.
    pub fn column_norm_sqr(&self, j: usize) -> f64 {
        self.m[0][j].norm_sqr() + self.m[1][j].norm_sqr()
    }

    /// `Tr(M†M)`
    pub fn frobenius_sqr(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// `max |(U†U − I)_jk|`
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.adjoint() * *self;
        let id = Self::identity();
        (0..2)
            .flat_map(|j| (0..2).map(move |k| (j, k)))
            .map(|(j, k)| (g.m[j][k] - id.m[j][k]).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn max_abs_diff(&self, other: &QubitMatrix) -> f64 {
        (0..2)
            .flat_map(|j| (0..2).map(move |k| (j, k)))
            .map(|(j, k)| (self.m[j][k] - other.m[j][k]).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &QubitMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Multiplies `other` by the phase that best aligns it with `self` and
    /// returns the entrywise distance. Zero iff the two agree up to a global
    /// phase (for equal-norm matrices).
    pub fn distance_up_to_phase(&self, other: &QubitMatrix) -> f64 {
        let overlap = (self.adjoint() * *other).trace();
        let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { ONE };
        self.max_abs_diff(&other.scale(phase))
    }
}

impl Mul for QubitMatrix {
    type Output = QubitMatrix;

    fn mul(self, rhs: QubitMatrix) -> QubitMatrix {
        let (a, b) = (&self.m, &rhs.m);
        let mut out = [[ZERO; 2]; 2];
        for (j, row) in out.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = a[j][0] * b[0][k] + a[j][1] * b[1][k];
            }
        }
        QubitMatrix::new(out, self.basis)
    }
}

impl fmt::Display for QubitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.m {
            writeln!(
                f,
                "[{:+.6}{:+.6}i  {:+.6}{:+.6}i]",
                row[0].re, row[0].im, row[1].re, row[1].im
            )?;
        }
        Ok(())
    }
}

/// Fixed table of named single-qubit gates.
///
/// `S = diag(1, i)` and `T = diag(1, e^{iπ/4})`: the phase sits on the second
/// basis vector (`|l⟩` in the time-bin basis).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
}

impl NamedGate {
    pub fn matrix(self) -> QubitMatrix {
        match self {
            NamedGate::I => QubitMatrix::identity(),
            NamedGate::X => QubitMatrix::pauli_x(),
            NamedGate::Y => QubitMatrix::pauli_y(),
            NamedGate::Z => QubitMatrix::pauli_z(),
            NamedGate::H => QubitMatrix::hadamard(),
            NamedGate::S => QubitMatrix::from_rows(ONE, ZERO, ZERO, I),
            NamedGate::T => QubitMatrix::from_rows(ONE, ZERO, ZERO, Complex64::from_polar(1.0, FRAC_PI_4)),
        }
    }
}

impl FromStr for NamedGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "I" => NamedGate::I,
            "X" => NamedGate::X,
            "Y" => NamedGate::Y,
            "Z" => NamedGate::Z,
            "H" => NamedGate::H,
            "S" => NamedGate::S,
            "T" => NamedGate::T,
            _ => return Err(Error::InvalidInput(format!("unknown gate '{s}'"))),
        })
    }
}

/// Haar-distributed 2×2 unitary: Gram–Schmidt on two columns of standard
/// complex normals (QR with the phases of R's diagonal removed).
pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> QubitMatrix {
    let mut z = [ZERO; 4];
    for v in z.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v = c(re, im);
    }
    let (a0, a1, b0, b1) = (z[0], z[1], z[2], z[3]);
    let na = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
    let (q0, q1) = (a0 / na, a1 / na);
    let proj = q0.conj() * b0 + q1.conj() * b1;
    let (r0, r1) = (b0 - proj * q0, b1 - proj * q1);
    let nr = (r0.norm_sqr() + r1.norm_sqr()).sqrt();
    QubitMatrix::from_rows(q0, r0 / nr, q1, r1 / nr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn named_gates_are_unitary() {
        for g in [NamedGate::I, NamedGate::X, NamedGate::Y, NamedGate::Z, NamedGate::H, NamedGate::S, NamedGate::T] {
            assert!(g.matrix().is_unitary(1e-15), "{g:?}");
        }
        assert!("Q".parse::<NamedGate>().is_err());
    }

    #[test]
    fn reals_round_trip() {
        let h = QubitMatrix::hadamard();
        assert_eq!(QubitMatrix::from_reals(h.to_reals(), BasisTag::TimeBin), h);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_phase(0.0), 0.0);
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(haar_random(&mut rng).is_unitary(1e-13));
        }
    }

    #[test]
    fn distance_ignores_global_phase() {
        let h = QubitMatrix::hadamard();
        let g = h.scale(Complex64::from_polar(1.0, 2.1));
        assert!(h.distance_up_to_phase(&g) < 1e-15);
        assert!(h.distance_up_to_phase(&QubitMatrix::identity()) > 0.1);
    }
}
