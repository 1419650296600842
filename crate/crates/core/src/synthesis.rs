//! Settings for an arbitrary target unitary, for either gate.
//!
//! # Dual-rail construction
//!
//! The dual-rail gate realizes
//!
//! ```text
//! M = P(θ₂) B(ω) P(θ₁) = [[e^{i(θ₁+θ₂)} cos ω,  i e^{iθ₂} sin ω],
//!                         [i e^{iθ₁} sin ω,     cos ω          ]]
//! ```
//!
//! Its lower-right entry is real and non-negative. Any unitary `U` can be
//! written `e^{iγ} U'` with `U'₂₂ ≥ 0`; then `cos ω = U'₂₂`, and the
//! off-diagonal phases fix `θ₁ = arg U'₂₁ − π/2` and `θ₂ = arg U'₁₂ − π/2`.
//! Unitarity forces `U'₂₁ = −det(U') · conj(U'₁₂)` and
//! `U'₁₁ = det(U') · conj(U'₂₂)`, so once both off-diagonal phases match,
//! `det U' = e^{i(θ₁+θ₂)}` and the top-left entry matches too. Every 2×2
//! unitary is therefore reachable up to the
//! unobservable global phase `γ`.
//!
//! When `U'₂₂` vanishes the phase is fixed instead by making `arg U'₂₁ = π/2`
//! (so `θ₁ = 0`); when the off-diagonals vanish, `θ₁ = 0` and
//! `θ₂ = arg U'₁₁`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::analysis::fidelity_up_to_phase;
use crate::circuits::{build_gate, BuildOptions, DualRailSettings, GateSettings, PolarizationSettings, Scheme};
use crate::error::{Error, Result};
use crate::linear::{wrap_phase, BasisTag, QubitMatrix};

/// Largest accepted `max |U†U − I|`.
pub const UNITARITY_TOL: f64 = 1e-8;

/// Entries below this magnitude are treated as zero when choosing branches.
const DEGENERATE: f64 = 1e-12;

/// A validated time-bin unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetUnitary {
    matrix: QubitMatrix,
    residual: f64,
}

impl TargetUnitary {
    pub fn new(matrix: QubitMatrix) -> Result<Self> {
        let residual = matrix.unitarity_residual();
        if residual.is_nan() || residual > UNITARITY_TOL {
            return Err(Error::NotUnitary(residual));
        }
        Ok(TargetUnitary { matrix: matrix.with_basis(BasisTag::TimeBin), residual })
    }

    pub fn matrix(&self) -> &QubitMatrix {
        &self.matrix
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// Splits `U = e^{iγ} U'` with `U'₂₂` real and non-negative, or, when
/// `|U₂₂| < 1e-12`, with `arg U'₂₁ = π/2`. `γ ∈ (−π, π]`.
pub fn factor_global_phase(u: &TargetUnitary) -> (f64, QubitMatrix) {
    let m = u.matrix();
    let d = m.m[1][1];
    let gamma = if d.norm() < DEGENERATE { m.m[1][0].arg() - FRAC_PI_2 } else { d.arg() };
    let gamma = wrap_phase(gamma);
    (gamma, m.scale(Complex64::from_polar(1.0, -gamma)))
}

pub fn synth_dualrail(u: &TargetUnitary) -> DualRailSettings {
    let (gamma, up) = factor_global_phase(u);
    let lower = up.m[1][1].norm();
    let cross = up.m[1][0].norm();
    let omega = cross.atan2(lower);
    let eta = omega.sin().powi(2);
    let (theta1, theta2) = if cross < DEGENERATE {
        (0.0, up.m[0][0].arg())
    } else if lower < DEGENERATE {
        // arg U'₂₁ = π/2 by the factoring branch
        (0.0, up.m[0][1].arg() - FRAC_PI_2)
    } else {
        (up.m[1][0].arg() - FRAC_PI_2, up.m[0][1].arg() - FRAC_PI_2)
    };
    DualRailSettings { eta, theta1: wrap_phase(theta1), theta2: wrap_phase(theta2), gamma }
}

/// Permutation between `(|s⟩, |l⟩)` and `(|H⟩, |V⟩)` coordinates, from
/// `|s⟩ → |V⟩`, `|l⟩ → |H⟩`.
pub fn timebin_to_polarization() -> QubitMatrix {
    QubitMatrix::pauli_x().with_basis(BasisTag::Polarization)
}

/// Jones matrix `R U R†` for the middle controller.
pub fn synth_polarization(u: &TargetUnitary) -> PolarizationSettings {
    let r = timebin_to_polarization();
    let jones = (r * *u.matrix() * r.adjoint()).with_basis(BasisTag::Polarization);
    PolarizationSettings { jones, gamma: 0.0 }
}

pub fn synthesize(u: &TargetUnitary, scheme: Scheme) -> GateSettings {
    match scheme {
        Scheme::Polarization => GateSettings::Polarization(synth_polarization(u)),
        Scheme::DualRail => GateSettings::DualRail(synth_dualrail(u)),
    }
}

/// Builds the ideal gate for `settings` and scores its effective map
/// against `u`.
pub fn verify_settings(settings: &GateSettings, u: &TargetUnitary) -> Result<f64> {
    let circuit = build_gate(settings, &BuildOptions::ideal())?;
    fidelity_up_to_phase(u.matrix(), &circuit.effective_qubit_map()?)
}

/// `e^{iγ} P(θ₂) B(ω) P(θ₁)`, the matrix the settings describe.
pub fn reconstruct_dualrail(s: &DualRailSettings) -> QubitMatrix {
    s.matrix().scale(Complex64::from_polar(1.0, s.gamma)).with_basis(BasisTag::TimeBin)
}
