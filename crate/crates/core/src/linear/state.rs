use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Mode, PRUNE, TOL};
use crate::error::{Error, Result};

/// Sparse single-photon state: a map from occupied mode to amplitude.
///
/// Amplitudes with magnitude below [`PRUNE`] are dropped on construction, so
/// two states describing the same vector have identical key sets. The squared
/// norm is the probability that the photon is still present; it is 1 for a
/// lossless history and smaller once loss has acted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhotonState {
    amps: BTreeMap<Mode, Complex64>,
}

impl PhotonState {
    pub fn vacuum() -> Self {
        PhotonState::default()
    }

    /// Builds a validated state. Modes may not repeat and the total
    /// probability may not exceed one.
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Mode, Complex64)>,
    {
        let mut amps = BTreeMap::new();
        for (mode, a) in entries {
            if amps.contains_key(&mode) {
                return Err(Error::DuplicateMode(mode));
            }
            amps.insert(mode, a);
        }
        let norm: f64 = amps.values().map(|a| a.norm_sqr()).sum();
        if norm > 1.0 + TOL {
            return Err(Error::NormExceeded(norm));
        }
        Ok(Self::from_map(amps))
    }

    /// A photon sitting in one mode with unit amplitude.
    pub fn single(mode: Mode) -> Self {
        Self::from_map(BTreeMap::from([(mode, Complex64::new(1.0, 0.0))]))
    }

    pub(crate) fn from_map(mut amps: BTreeMap<Mode, Complex64>) -> Self {
        amps.retain(|_, a| a.norm() >= PRUNE);
        PhotonState { amps }
    }

    pub fn amplitude(&self, mode: &Mode) -> Complex64 {
        self.amps.get(mode).copied().unwrap_or_default()
    }

    pub fn probability(&self, mode: &Mode) -> f64 {
        self.amplitude(mode).norm_sqr()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &Complex64)> {
        self.amps.iter()
    }

    pub fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.amps.keys()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Sum of squared amplitudes.
    pub fn total_probability(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &PhotonState) -> Complex64 {
        self.amps.iter().map(|(m, a)| a.conj() * other.amplitude(m)).sum()
    }

    pub fn scaled(&self, c: Complex64) -> PhotonState {
        Self::from_map(self.amps.iter().map(|(m, a)| (m.clone(), a * c)).collect())
    }

    /// Restricts the state to modes accepted by `keep`, modelling a
    /// time-resolved (or path-resolved) detection. Returns the restricted
    /// state and its probability. With `renormalize` the restricted state is
    /// rescaled to unit norm, which fails if nothing survived.
    pub fn project<F>(&self, keep: F, renormalize: bool) -> Result<(PhotonState, f64)>
    where
        F: Fn(&Mode) -> bool,
    {
        let kept: BTreeMap<Mode, Complex64> =
            self.amps.iter().filter(|(m, _)| keep(m)).map(|(m, a)| (m.clone(), *a)).collect();
        let state = PhotonState { amps: kept };
        let p = state.total_probability();
        if !renormalize {
            return Ok((state, p));
        }
        if p <= 0.0 {
            return Err(Error::ZeroProbability);
        }
        Ok((state.scaled(Complex64::new(1.0 / p.sqrt(), 0.0)), p))
    }

    /// Entrywise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &PhotonState, tol: f64) -> bool {
        self.amps.keys().chain(other.amps.keys()).all(|m| (self.amplitude(m) - other.amplitude(m)).norm() <= tol)
    }
}

impl FromIterator<(Mode, Complex64)> for PhotonState {
    /// Collects without validation; later duplicates overwrite earlier ones.
    fn from_iter<I: IntoIterator<Item = (Mode, Complex64)>>(iter: I) -> Self {
        Self::from_map(iter.into_iter().collect())
    }
}
