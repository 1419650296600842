use std::f64::consts::PI;

use crate::error::{Error, Result};

/// m/s
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Fibre constants for timing and thermal estimates.
///
/// `dn_dt` and `expansion` are textbook fused-silica values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalModel {
    /// m
    pub wavelength: f64,
    pub index: f64,
    /// 1/K
    pub dn_dt: f64,
    /// 1/K
    pub expansion: f64,
}

impl Default for ThermalModel {
    fn default() -> Self {
        ThermalModel { wavelength: 1.55e-6, index: 1.468, dn_dt: 1.06e-5, expansion: 5.5e-7 }
    }
}

impl ThermalModel {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.wavelength, self.index, self.dn_dt, self.expansion].iter().all(|x| x.is_finite() && *x > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("thermal model constants must be positive".into()))
        }
    }
}

/// Separation between the two time bins, given directly or via the switch
/// rate (`Δt = 1/rate`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinSeparation {
    Interval(f64),
    Rate(f64),
}

impl BinSeparation {
    pub fn seconds(self) -> Result<f64> {
        match self {
            BinSeparation::Interval(dt) if dt >= 0.0 && dt.is_finite() => Ok(dt),
            BinSeparation::Rate(r) if r > 0.0 && r.is_finite() => Ok(1.0 / r),
            other => Err(Error::InvalidInput(format!("invalid bin separation {other:?}"))),
        }
    }
}

/// Arm-length imbalance that delays one arm by `Δt`: `L = cΔt/n`.
///
/// The group delay of a fibre of index `n` and length `L` is `nL/c`, which
/// gives the expression above (not `cnΔt`).
pub fn path_length_difference(sep: BinSeparation, model: &ThermalModel) -> Result<f64> {
    model.validate()?;
    Ok(SPEED_OF_LIGHT * sep.seconds()? / model.index)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalDrift {
    /// rad
    pub phase: f64,
    /// `1 − cos(δφ/2)`: fidelity lost to a one-arm phase error.
    pub fidelity_penalty: f64,
}

/// Relative phase drift of an interferometer with imbalance `ΔL` after a
/// temperature change `ΔT`: `δφ = (2π/λ) ΔL ΔT (dn/dT + n α)`.
///
/// Common-mode drift of the shared fibre length cancels; only the
/// imbalance contributes.
pub fn thermal_phase_drift(delta_l: f64, delta_t: f64, model: &ThermalModel) -> Result<ThermalDrift> {
    model.validate()?;
    if !(delta_l >= 0.0 && delta_t >= 0.0) {
        return Err(Error::InvalidInput("length and temperature offsets must be >= 0".into()));
    }
    let phase = 2.0 * PI / model.wavelength * delta_l * delta_t * (model.dn_dt + model.index * model.expansion);
    Ok(ThermalDrift { phase, fidelity_penalty: 1.0 - (phase / 2.0).cos() })
}
