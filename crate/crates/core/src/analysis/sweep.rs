use std::fmt;
use std::io::Write;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::fidelity_up_to_phase;
use crate::circuits::{build_gate, BuildOptions, GateSettings, Scheme, StageKind};
use crate::error::{Error, Result};
use crate::synthesis::{synthesize, TargetUnitary};

/// Perturbation model for a tolerance sweep. All perturbations are
/// zero-mean Gaussians; `η` is clipped to `[0, 1]` and losses to `≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TolerancePolicy {
    /// Relative phase error (rad) of the input interferometer.
    pub phase_std: f64,
    /// Relative phase error (rad) of the output interferometer.
    pub output_phase_std: f64,
    /// Spread (dB) added to the nominal insertion loss of each switch pass.
    /// Both bins cross every switch, so this changes survival but not
    /// fidelity.
    pub loss_spread_db: f64,
    /// Fixed extinction ratio applied to switches and PBSCs, if set.
    pub extinction_db: Option<f64>,
    /// Error on the coupling ratio `η` (dual-rail only).
    pub coupling_std: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            phase_std: 0.0,
            output_phase_std: 0.0,
            loss_spread_db: 0.0,
            extinction_db: None,
            coupling_std: 0.0,
            samples: 1000,
            seed: 0,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        let stds = [self.phase_std, self.output_phase_std, self.loss_spread_db, self.coupling_std];
        if stds.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidInput("standard deviations must be finite and >= 0".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidInput("sample count must be >= 1".into()));
        }
        if let Some(e) = self.extinction_db {
            if e.is_nan() || e <= 0.0 {
                return Err(Error::InvalidInput("extinction ratio must be > 0 dB".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleResult {
    pub index: usize,
    pub fidelity: f64,
    /// Mean probability that a basis input lands in the output qubit modes.
    pub survival: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
}

impl Summary {
    fn of(values: impl Iterator<Item = f64>) -> Summary {
        let mut v: Vec<f64> = values.collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        v.sort_by(f64::total_cmp);
        // nearest-rank percentile
        let pct = |p: f64| v[((p * n).ceil() as usize).clamp(1, v.len()) - 1];
        Summary { mean, std: var.sqrt(), min: v[0], max: v[v.len() - 1], p05: pct(0.05), p50: pct(0.5), p95: pct(0.95) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceReport {
    pub scheme: Scheme,
    pub samples: Vec<SampleResult>,
    pub fidelity: Summary,
    pub survival: Summary,
}

impl ToleranceReport {
    /// `1 − mean fidelity`
    pub fn mean_penalty(&self) -> f64 {
        self.samples.iter().map(|s| 1.0 - s.fidelity).sum::<f64>() / self.samples.len() as f64
    }

    /// `sample,fidelity,survival` with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["sample", "fidelity", "survival"]).map_err(io)?;
        for s in &self.samples {
            w.write_record([s.index.to_string(), format!("{:.15e}", s.fidelity), format!("{:.15e}", s.survival)])
                .map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidInput(format!("csv: {e}")))
    }
}

impl fmt::Display for ToleranceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme {}  samples {}", self.scheme.name(), self.samples.len())?;
        writeln!(f, "{:<10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "", "mean", "std", "min", "p05", "p50", "p95", "max")?;
        for (name, s) in [("fidelity", &self.fidelity), ("survival", &self.survival)] {
            writeln!(
                f,
                "{:<10} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                name, s.mean, s.std, s.min, s.p05, s.p50, s.p95, s.max
            )?;
        }
        write!(f, "mean penalty {:.6e}", self.mean_penalty())
    }
}

fn gauss(rng: &mut ChaCha8Rng, std: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z * std
}

fn run_sample(
    index: usize,
    target: &TargetUnitary,
    ideal: &GateSettings,
    base: &BuildOptions,
    nominal: &[(String, f64)],
    policy: &TolerancePolicy,
) -> Result<SampleResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    rng.set_stream(index as u64);

    // Draw order is fixed so a sample depends only on (seed, index).
    let d_in = gauss(&mut rng, policy.phase_std);
    let d_out = gauss(&mut rng, policy.output_phase_std);
    let d_eta = gauss(&mut rng, policy.coupling_std);

    let scheme = ideal.scheme();
    let mut settings = *ideal;
    if let GateSettings::DualRail(ref mut d) = settings {
        d.eta = (d.eta + d_eta).clamp(0.0, 1.0);
    }

    let mut opts = base.clone();
    let imp = &mut opts.imperfections;
    if let Some(e) = policy.extinction_db {
        imp.extinction_db = e;
    }
    for (label, loss_db) in nominal {
        let d_loss = gauss(&mut rng, policy.loss_spread_db);
        if policy.loss_spread_db > 0.0 {
            imp.stages.entry(label.clone()).or_default().loss_db = Some((loss_db + d_loss).max(0.0));
        }
    }
    for (label, d) in [(scheme.input_arm_stage(), d_in), (scheme.output_arm_stage(), d_out)] {
        if d != 0.0 {
            imp.stages.entry(label.to_owned()).or_default().phase_error += d;
        }
    }

    let circuit = build_gate(&settings, &opts)?;
    let map = circuit.effective_qubit_map()?;
    Ok(SampleResult {
        index,
        fidelity: fidelity_up_to_phase(target.matrix(), &map)?,
        survival: 0.5 * map.frobenius_sqr(),
    })
}

/// Samples perturbed gates around the ideal settings for `target`.
///
/// Sample `i` draws from a ChaCha8 stream selected by `(policy.seed, i)`, so
/// the report does not depend on how samples are spread over threads.
pub fn monte_carlo_sweep(
    target: &TargetUnitary,
    scheme: Scheme,
    base: &BuildOptions,
    policy: &TolerancePolicy,
) -> Result<ToleranceReport> {
    policy.validate()?;
    let ideal = synthesize(target, scheme);
    let nominal: Vec<(String, f64)> = build_gate(&ideal, base)?
        .stages()
        .iter()
        .filter(|s| matches!(s.kind, StageKind::Switch | StageKind::Combiner))
        .map(|s| (s.label.clone(), s.loss_db))
        .collect();
    let samples: Vec<SampleResult> = (0..policy.samples)
        .into_par_iter()
        .map(|i| run_sample(i, target, &ideal, base, &nominal, policy))
        .collect::<Result<_>>()?;
    Ok(ToleranceReport {
        scheme,
        fidelity: Summary::of(samples.iter().map(|s| s.fidelity)),
        survival: Summary::of(samples.iter().map(|s| s.survival)),
        samples,
    })
}
