//! Command-line front end. The `timebin` binary is a thin wrapper around
//! [`main`].
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 validation failure,
//! 3 simulation domain error (e.g. a photon pushed out of the time window).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};

use crate::analysis::{
    fidelity_up_to_phase, loss_budget, monte_carlo_sweep, path_length_difference, thermal_phase_drift, BinSeparation,
    ThermalModel, TolerancePolicy,
};
use crate::circuits::{prepare_timebin, source_state, BuildOptions, GateSettings, Imperfections, Scheme};
use crate::error::{Error, Result};
use crate::io::{parse_matrix_arg, CircuitFile};
use crate::linear::{PhotonState, TimeWindow};
use crate::synthesis::{synthesize, verify_settings};

const GATE_HELP: &str = "Named gates: I, X, Y = [[0,-i],[i,0]], Z, H, S = diag(1, i), T = diag(1, e^{i pi/4}); \
the phase of S and T sits on |l>. Otherwise give 8 reals, row-major re/im pairs.";

#[derive(Debug, Parser)]
#[command(name = "timebin", version, about = "Time-bin qubit gate synthesis and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize gate settings for a target unitary
    Synth {
        #[arg(long, help = GATE_HELP)]
        target: String,
        #[arg(long, default_value = "dualrail")]
        scheme: String,
        /// Write a circuit file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a time-bin qubit through a circuit file
    #[command(group(ArgGroup::new("source").required(true).args(["input", "basis"])))]
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        /// Prepared input "alpha,phi": alpha|s> + e^{i phi} sqrt(1-alpha^2)|l>
        #[arg(long, allow_hyphen_values = true)]
        input: Option<String>,
        /// Basis input, s or l
        #[arg(long)]
        basis: Option<String>,
        /// Emit CSV instead of a table
        #[arg(long)]
        csv: bool,
    },
    /// Itemize insertion losses of a circuit file
    Budget {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Monte-Carlo tolerance sweep around a circuit's ideal settings
    Sweep {
        #[arg(long)]
        circuit: PathBuf,
        /// Defaults to the target stored in the circuit file
        #[arg(long, help = GATE_HELP)]
        target: Option<String>,
        /// Input-interferometer phase error std (rad)
        #[arg(long, default_value_t = 0.0)]
        phase_std: f64,
        /// Output-interferometer phase error std (rad)
        #[arg(long, default_value_t = 0.0)]
        output_phase_std: f64,
        /// Insertion-loss spread per stage (dB)
        #[arg(long, default_value_t = 0.0)]
        loss_spread: f64,
        /// Coupling-ratio std (dual-rail only)
        #[arg(long, default_value_t = 0.0)]
        coupling_std: f64,
        /// Extinction ratio applied to switches and PBSCs (dB)
        #[arg(long)]
        extinction_db: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Arm imbalance for a bin separation, and thermal phase drift
    #[command(group(ArgGroup::new("timing").required(true).args(["rate", "dt"])))]
    Calc {
        /// Switch rate (Hz); the bin separation is 1/rate
        #[arg(long)]
        rate: Option<f64>,
        /// Bin separation (s)
        #[arg(long)]
        dt: Option<f64>,
        /// Temperature excursion (K)
        #[arg(long = "dT")]
        delta_t: Option<f64>,
        /// Effective refractive index
        #[arg(long, default_value_t = 1.468)]
        index: f64,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// writing data to `out`.
pub fn run<I, T, W>(args: I, out: &mut W) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Parse(e.to_string()))?;
    execute(cli.command, out)
}

/// Entry point for the binary. Returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("error: {}", msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
            return 1;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli.command, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute<W: Write>(cmd: Command, out: &mut W) -> Result<()> {
    match cmd {
        Command::Synth { target, scheme, out: path } => cmd_synth(&target, &scheme, path.as_deref(), out),
        Command::Simulate { circuit, input, basis, csv } => {
            cmd_simulate(&circuit, input.as_deref(), basis.as_deref(), csv, out)
        }
        Command::Budget { circuit } => cmd_budget(&circuit, out),
        Command::Sweep {
            circuit,
            target,
            phase_std,
            output_phase_std,
            loss_spread,
            coupling_std,
            extinction_db,
            n,
            seed,
            csv,
        } => {
            let policy = TolerancePolicy {
                phase_std,
                output_phase_std,
                loss_spread_db: loss_spread,
                extinction_db,
                coupling_std,
                samples: n,
                seed,
            };
            cmd_sweep(&circuit, target.as_deref(), &policy, csv.as_deref(), out)
        }
        Command::Calc { rate, dt, delta_t, index } => {
            let sep = match (rate, dt) {
                (Some(r), None) => BinSeparation::Rate(r),
                (None, Some(t)) => BinSeparation::Interval(t),
                _ => return Err(Error::InvalidInput("give exactly one of --rate or --dt".into())),
            };
            cmd_calc(sep, delta_t, index, out)
        }
    }
}

fn w<W: Write>(out: &mut W, s: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(s).map_err(Error::from)
}

pub fn cmd_synth<W: Write>(target: &str, scheme: &str, path: Option<&std::path::Path>, out: &mut W) -> Result<()> {
    let scheme: Scheme = scheme.parse()?;
    let target = parse_matrix_arg(target)?;
    let settings = synthesize(&target, scheme);
    let fidelity = verify_settings(&settings, &target)?;
    w(out, format_args!("scheme {}\n", scheme.name()))?;
    match &settings {
        GateSettings::DualRail(d) => {
            w(out, format_args!("eta {:.6}\n", d.eta))?;
            w(out, format_args!("theta1 {:.6}\n", d.theta1))?;
            w(out, format_args!("theta2 {:.6}\n", d.theta2))?;
        }
        GateSettings::Polarization(p) => {
            for (i, row) in p.jones.m.iter().enumerate() {
                w(
                    out,
                    format_args!(
                        "jones[{i}] {:+.6} {:+.6}i  {:+.6} {:+.6}i\n",
                        row[0].re, row[0].im, row[1].re, row[1].im
                    ),
                )?;
            }
        }
    }
    w(out, format_args!("gamma {:.6}\n", settings.gamma()))?;
    w(out, format_args!("fidelity {:.6}\n", fidelity))?;
    if let Some(path) = path {
        CircuitFile::from_settings(&settings, &Imperfections::default(), TimeWindow::default())
            .with_target(&target)
            .save(path)?;
    }
    Ok(())
}

fn parse_input(spec: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse(format!("--input expects \"alpha,phi\", got '{spec}'"));
    let (a, p) = spec.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, p.trim().parse().map_err(|_| bad())?))
}

pub fn cmd_simulate<W: Write>(
    circuit: &std::path::Path,
    input: Option<&str>,
    basis: Option<&str>,
    csv: bool,
    out: &mut W,
) -> Result<()> {
    let file = CircuitFile::load(circuit)?;
    let gate = file.build()?;
    let (chain, state) = match (input, basis) {
        (Some(spec), None) => {
            let (alpha, phi) = parse_input(spec)?;
            let opts = BuildOptions { window: gate.window(), imperfections: Imperfections::ideal() };
            (prepare_timebin(alpha, phi, &opts)?.then(&gate)?, source_state())
        }
        (None, Some(b)) => {
            let idx = match b {
                "s" => 0,
                "l" => 1,
                _ => return Err(Error::Parse(format!("--basis expects s or l, got '{b}'"))),
            };
            (gate.clone(), PhotonState::single(gate.inputs()[idx].clone()))
        }
        _ => return Err(Error::Parse("give exactly one of --input or --basis".into())),
    };
    let output = chain.run(&state)?;
    let [s_mode, l_mode] = gate.outputs();
    let (p_s, p_l) = (output.probability(s_mode), output.probability(l_mode));
    let survival = output.total_probability();
    let fidelity = match file.target()? {
        Some(t) => Some(fidelity_up_to_phase(t.matrix(), &gate.effective_qubit_map()?)?),
        None => None,
    };
    if csv {
        w(out, format_args!("mode,re,im,probability\n"))?;
        for (m, a) in output.iter() {
            w(out, format_args!("{m},{:.6},{:.6},{:.6}\n", a.re, a.im, a.norm_sqr()))?;
        }
        return Ok(());
    }
    w(out, format_args!("{:<12} {:>10} {:>10} {:>10}\n", "mode", "re", "im", "prob"))?;
    for (m, a) in output.iter() {
        w(out, format_args!("{:<12} {:>10.6} {:>10.6} {:>10.6}\n", m.to_string(), a.re, a.im, a.norm_sqr()))?;
    }
    w(out, format_args!("P(s) {:.6}\n", p_s))?;
    w(out, format_args!("P(l) {:.6}\n", p_l))?;
    w(out, format_args!("survival {:.6}\n", survival))?;
    if let Some(f) = fidelity {
        w(out, format_args!("fidelity {:.6}\n", f))?;
    }
    Ok(())
}

pub fn cmd_budget<W: Write>(circuit: &std::path::Path, out: &mut W) -> Result<()> {
    let budget = loss_budget(&CircuitFile::load(circuit)?.build()?)?;
    w(out, format_args!("{budget}\n"))
}

pub fn cmd_sweep<W: Write>(
    circuit: &std::path::Path,
    target: Option<&str>,
    policy: &TolerancePolicy,
    csv: Option<&std::path::Path>,
    out: &mut W,
) -> Result<()> {
    let file = CircuitFile::load(circuit)?;
    let target = match target {
        Some(t) => parse_matrix_arg(t)?,
        None => file
            .target()?
            .ok_or_else(|| Error::InvalidInput("circuit file has no target; pass --target".into()))?,
    };
    let report = monte_carlo_sweep(&target, file.scheme()?, &file.build_options()?, policy)?;
    w(out, format_args!("{report}\n"))?;
    if let Some(path) = csv {
        let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        report.write_csv(std::io::BufWriter::new(f))?;
    }
    Ok(())
}

pub fn cmd_calc<W: Write>(sep: BinSeparation, delta_t: Option<f64>, index: f64, out: &mut W) -> Result<()> {
    let model = ThermalModel { index, ..ThermalModel::default() };
    let dt = sep.seconds()?;
    let length = path_length_difference(sep, &model)?;
    w(out, format_args!("dt_s {:.6e}\n", dt))?;
    w(out, format_args!("path_length_m {:.6}\n", length))?;
    w(out, format_args!("path_length_cm {:.2}\n", length * 100.0))?;
    if let Some(d) = delta_t {
        let drift = thermal_phase_drift(length, d, &model)?;
        w(out, format_args!("delta_T_K {:.6}\n", d))?;
        w(out, format_args!("phase_drift_rad {:.6}\n", drift.phase))?;
        w(out, format_args!("fidelity_penalty {:.6e}\n", drift.fidelity_penalty))?;
    }
    Ok(())
}
