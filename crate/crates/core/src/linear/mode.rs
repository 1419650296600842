use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Upper bound on distinct path labels in one circuit.
pub const MAX_PATHS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Polarization::H
        } else {
            Polarization::V
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::H => write!(f, "H"),
            Polarization::V => write!(f, "V"),
        }
    }
}

/// A single-photon occupation slot: spatial path, time bin (in units of the
/// bin separation) and polarization.
///
/// Modes order by path label, then slot, then polarization. The ordering is
/// what makes [`PhotonState`](super::PhotonState) canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub path: String,
    pub slot: u32,
    pub pol: Polarization,
}

impl Mode {
    pub fn new(path: impl Into<String>, slot: u32, pol: Polarization) -> Self {
        Mode { path: path.into(), slot, pol }
    }

    pub fn h(path: impl Into<String>, slot: u32) -> Self {
        Mode::new(path, slot, Polarization::H)
    }

    pub fn v(path: impl Into<String>, slot: u32) -> Self {
        Mode::new(path, slot, Polarization::V)
    }

    pub fn with_path(&self, path: &str) -> Self {
        Mode { path: path.to_owned(), slot: self.slot, pol: self.pol }
    }

    pub fn with_pol(&self, pol: Polarization) -> Self {
        Mode { path: self.path.clone(), slot: self.slot, pol }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.path, self.slot, self.pol)
    }
}

impl FromStr for Mode {
    type Err = Error;

    /// Parses the interchange key form `path:slot:pol`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed mode key '{s}', expected path:slot:pol"));
        let mut parts = s.rsplitn(3, ':');
        let pol = match parts.next().ok_or_else(bad)? {
            "H" => Polarization::H,
            "V" => Polarization::V,
            _ => return Err(bad()),
        };
        let slot = parts.next().ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())?;
        let path = parts.next().ok_or_else(bad)?;
        if path.is_empty() {
            return Err(bad());
        }
        Ok(Mode::new(path, slot, pol))
    }
}

/// Range of admissible time slots, `0..slots`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeWindow {
    slots: u32,
}

impl Default for TimeWindow {
    fn default() -> Self {
        TimeWindow { slots: 8 }
    }
}

impl TimeWindow {
    pub fn new(slots: u32) -> Result<Self> {
        if slots == 0 {
            return Err(Error::InvalidInput("time window must hold at least one slot".into()));
        }
        Ok(TimeWindow { slots })
    }

    pub fn slots(&self) -> u32 {
        self.slots
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        0..self.slots
    }

    /// Checks a (possibly shifted) slot index, returning it as `u32` when it
    /// lies inside the window.
    pub fn check(&self, path: &str, slot: i64) -> Result<u32> {
        if slot < 0 || slot >= i64::from(self.slots) {
            Err(Error::TimeWindowOverflow { path: path.to_owned(), slot, window: self.slots })
        } else {
            Ok(slot as u32)
        }
    }

    /// Every mode on `path` inside the window.
    pub fn modes_on<'a>(&self, path: &'a str) -> impl Iterator<Item = Mode> + 'a {
        let slots = self.slots;
        (0..slots).flat_map(move |t| Polarization::BOTH.into_iter().map(move |p| Mode::new(path, t, p)))
    }
}
