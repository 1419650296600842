//! JSON interchange: circuit files, states and matrices.
//!
//! Complex numbers are `[re, im]` pairs, 2×2 matrices are 8 reals in
//! row-major re/im order, and mode keys are `"path:slot:pol"` strings.
//!
//! A circuit file looks like
//!
//! ```json
//! {
//!   "scheme": "dualrail",
//!   "settings": { "eta": 0.5, "theta1": 1.5707963, "theta2": 1.5707963, "gamma": 3.1415926 },
//!   "imperfections": { "sw_in": { "loss_db": 0.0 }, "sw_out": { "loss_db": 0.0, "extinction_db": 30.0 } },
//!   "window": 8,
//!   "target": [0.7071, 0, 0.7071, 0, 0.7071, 0, -0.7071, 0]
//! }
//! ```
//!
//! Polarization settings are `{ "jones": [8 reals], "gamma": ... }`.
//! `imperfections`, `window` and `target` are optional. Stages without an
//! entry use library defaults (switches lose 1.5 dB per pass).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::circuits::{
    build_gate, BuildOptions, CircuitSpec, DualRailSettings, GateSettings, Imperfections, PolarizationSettings, Scheme,
    StageImperfection, StageKind,
};
use crate::error::{Error, Result};
use crate::linear::{BasisTag, Mode, NamedGate, PhotonState, QubitMatrix, TimeWindow};
use crate::synthesis::TargetUnitary;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extinction_db: Option<f64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub phase_error: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DualRailEntry {
    eta: f64,
    theta1: f64,
    theta2: f64,
    #[serde(default)]
    gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolarizationEntry {
    jones: [f64; 8],
    #[serde(default)]
    gamma: f64,
}

/// On-disk description of one gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub scheme: String,
    pub settings: Value,
    #[serde(default)]
    pub imperfections: BTreeMap<String, StageEntry>,
    #[serde(default = "default_window")]
    pub window: u32,
    /// Target unitary the settings were synthesized for, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<[f64; 8]>,
}

fn default_window() -> u32 {
    TimeWindow::default().slots()
}

fn stage_kind(scheme: Scheme, label: &str) -> Option<StageKind> {
    use StageKind::*;
    let kind = match (scheme, label) {
        (_, "sw_in") => Switch,
        (_, "sw_out") => Combiner,
        (_, "delay_upper" | "delay_lower") => Delay,
        (Scheme::Polarization, "pc_flip_in" | "pc" | "pc_flip_out") => PolarizationController,
        (Scheme::Polarization, "pbsc_in") => PbscCombine,
        (Scheme::Polarization, "pbsc_out") => PbscSplit,
        (Scheme::DualRail, "ps1" | "ps2") => PhaseShifter,
        (Scheme::DualRail, "vc") => Coupler,
        _ => return None,
    };
    Some(kind)
}

impl CircuitFile {
    pub fn from_settings(settings: &GateSettings, imperfections: &Imperfections, window: TimeWindow) -> Self {
        let settings_value = match settings {
            GateSettings::DualRail(d) => serde_json::to_value(DualRailEntry {
                eta: d.eta,
                theta1: d.theta1,
                theta2: d.theta2,
                gamma: d.gamma,
            }),
            GateSettings::Polarization(p) => {
                serde_json::to_value(PolarizationEntry { jones: p.jones.to_reals(), gamma: p.gamma })
            }
        }
        .expect("settings serialize");
        let imperfections = imperfections
            .stages
            .iter()
            .map(|(k, v)| {
                (k.clone(), StageEntry { loss_db: v.loss_db, extinction_db: v.extinction_db, phase_error: v.phase_error })
            })
            .collect();
        CircuitFile {
            scheme: settings.scheme().name().to_owned(),
            settings: settings_value,
            imperfections,
            window: window.slots(),
            target: None,
        }
    }

    pub fn with_target(mut self, target: &TargetUnitary) -> Self {
        self.target = Some(target.matrix().to_reals());
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        // surface settings/imperfection problems at load time
        file.gate_settings()?;
        file.build_options()?;
        file.target()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit file serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn scheme(&self) -> Result<Scheme> {
        Scheme::from_str(&self.scheme).map_err(|_| Error::Parse(format!("field `scheme`: unknown scheme '{}'", self.scheme)))
    }

    pub fn gate_settings(&self) -> Result<GateSettings> {
        let field = |e: serde_json::Error| Error::Parse(format!("field `settings`: {e}"));
        Ok(match self.scheme()? {
            Scheme::DualRail => {
                let d: DualRailEntry = serde_json::from_value(self.settings.clone()).map_err(field)?;
                if !(0.0..=1.0).contains(&d.eta) {
                    return Err(Error::InvalidRatio(d.eta));
                }
                GateSettings::DualRail(DualRailSettings { eta: d.eta, theta1: d.theta1, theta2: d.theta2, gamma: d.gamma })
            }
            Scheme::Polarization => {
                let p: PolarizationEntry = serde_json::from_value(self.settings.clone()).map_err(field)?;
                let jones = QubitMatrix::from_reals(p.jones, BasisTag::Polarization);
                let residual = jones.unitarity_residual();
                if residual > 1e-10 {
                    return Err(Error::NotUnitary(residual));
                }
                GateSettings::Polarization(PolarizationSettings { jones, gamma: p.gamma })
            }
        })
    }

    pub fn build_options(&self) -> Result<BuildOptions> {
        let scheme = self.scheme()?;
        let mut imp = Imperfections::default();
        for (label, e) in &self.imperfections {
            let kind = stage_kind(scheme, label)
                .ok_or_else(|| Error::Parse(format!("field `imperfections`: unknown stage '{label}' for {}", scheme.name())))?;
            if e.extinction_db.is_some() && !kind.has_extinction() {
                return Err(Error::Parse(format!("field `imperfections.{label}`: stage has no extinction ratio")));
            }
            imp.stages.insert(
                label.clone(),
                StageImperfection { loss_db: e.loss_db, extinction_db: e.extinction_db, phase_error: e.phase_error },
            );
        }
        let window = TimeWindow::new(self.window).map_err(|_| Error::Parse("field `window`: must be >= 1".into()))?;
        Ok(BuildOptions { window, imperfections: imp })
    }

    pub fn target(&self) -> Result<Option<TargetUnitary>> {
        self.target.map(|r| TargetUnitary::new(QubitMatrix::from_reals(r, BasisTag::TimeBin))).transpose()
    }

    pub fn build(&self) -> Result<CircuitSpec> {
        build_gate(&self.gate_settings()?, &self.build_options()?)
    }
}

/// Parses a named gate (`I X Y Z H S T`) or 8 reals separated by spaces
/// or commas.
pub fn parse_matrix_arg(arg: &str) -> Result<TargetUnitary> {
    let trimmed = arg.trim();
    if let Ok(g) = NamedGate::from_str(trimmed) {
        return TargetUnitary::new(g.matrix());
    }
    let nums: Vec<f64> = trimmed
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad matrix entry '{s}'"))))
        .collect::<Result<_>>()?;
    let reals: [f64; 8] = nums
        .try_into()
        .map_err(|v: Vec<f64>| Error::Parse(format!("matrix needs 8 reals or a gate name, got {} values", v.len())))?;
    TargetUnitary::new(QubitMatrix::from_reals(reals, BasisTag::TimeBin))
}

pub fn complex_to_json(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

fn complex_from_json(v: &Value) -> Result<Complex64> {
    let pair: [f64; 2] = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("complex number: {e}")))?;
    Ok(Complex64::new(pair[0], pair[1]))
}

/// `{"path:slot:pol": [re, im], ...}`
pub fn state_to_json(state: &PhotonState) -> Value {
    Value::Object(state.iter().map(|(m, a)| (m.to_string(), complex_to_json(*a))).collect())
}

pub fn state_from_json(v: &Value) -> Result<PhotonState> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("state must be a JSON object".into()))?;
    let entries = obj
        .iter()
        .map(|(k, v)| Ok((Mode::from_str(k).map_err(|e| Error::Parse(e.to_string()))?, complex_from_json(v)?)))
        .collect::<Result<Vec<_>>>()?;
    PhotonState::new(entries)
}

pub fn matrix_to_json(m: &QubitMatrix) -> Value {
    serde_json::json!(m.to_reals())
}

pub fn matrix_from_json(v: &Value, basis: BasisTag) -> Result<QubitMatrix> {
    let r: [f64; 8] = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    Ok(QubitMatrix::from_reals(r, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::synthesize;

    #[test]
    fn named_and_numeric_targets() {
        assert_eq!(parse_matrix_arg("H").unwrap().matrix(), &NamedGate::H.matrix());
        let x = parse_matrix_arg("0 0 1 0, 1 0 0 0").unwrap();
        assert_eq!(x.matrix(), &NamedGate::X.matrix());
        assert!(matches!(parse_matrix_arg("1 0 0 0 0 0 0.9 0"), Err(Error::NotUnitary(_))));
        assert!(matches!(parse_matrix_arg("1 0 0"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix_arg("Q"), Err(Error::Parse(_))));
    }

    #[test]
    fn circuit_file_round_trip() {
        let h = parse_matrix_arg("H").unwrap();
        for scheme in [Scheme::DualRail, Scheme::Polarization] {
            let s = synthesize(&h, scheme);
            let f = CircuitFile::from_settings(&s, &Imperfections::default(), TimeWindow::default()).with_target(&h);
            let back = CircuitFile::parse(&f.to_json()).unwrap();
            assert_eq!(back, f);
            assert_eq!(back.gate_settings().unwrap(), s);
        }
    }

    #[test]
    fn rejects_unknown_fields() {
        let base = r#"{"scheme":"dualrail","settings":{"eta":0,"theta1":0,"theta2":0}"#;
        assert!(CircuitFile::parse(&format!("{base}}}")).is_ok());
        let e = CircuitFile::parse(&format!("{base},\"colour\":1}}")).unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("colour") && m.contains("line")), "{e}");
        let e = CircuitFile::parse(r#"{"scheme":"dualrail","settings":{"eta":0,"theta1":0,"theta2":0,"phi":1}}"#).unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("settings")), "{e}");
        let e = CircuitFile::parse(&format!("{base},\"imperfections\":{{\"pc\":{{}}}}}}")).unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("pc")), "{e}");
        let e = CircuitFile::parse(&format!("{base},\"imperfections\":{{\"vc\":{{\"extinction_db\":20}}}}}}")).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
        assert!(CircuitFile::parse(r#"{"scheme":"triangle","settings":{}}"#).is_err());
        assert!(matches!(
            CircuitFile::parse(r#"{"scheme":"dualrail","settings":{"eta":2,"theta1":0,"theta2":0}}"#),
            Err(Error::InvalidRatio(_))
        ));
    }

    #[test]
    fn state_json() {
        let s = PhotonState::new([
            (Mode::h("in", 0), Complex64::new(0.6, 0.0)),
            (Mode::v("in", 1), Complex64::new(0.0, 0.8)),
        ])
        .unwrap();
        let v = state_to_json(&s);
        assert_eq!(v["in:1:V"], serde_json::json!([0.0, 0.8]));
        assert_eq!(state_from_json(&v).unwrap(), s);
        assert!(state_from_json(&serde_json::json!({"in:0": [1, 0]})).is_err());
        let m = NamedGate::Y.matrix();
        assert_eq!(matrix_from_json(&matrix_to_json(&m), BasisTag::TimeBin).unwrap(), m);
    }
}
