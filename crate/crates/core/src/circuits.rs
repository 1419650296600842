//! The preparation circuit and the two time-bin gates, assembled from
//! component models into ordered stage lists.
//!
//! Both gates emit their output qubit one bin later than it entered: input
//! `(s, l)` lives in slots `(0, 1)` of path `in`, output in slots `(1, 2)` of
//! path `out`. The output slots are declared as the new `(s, l)`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::components::{self, coupling_angle, RouteTable};
use crate::error::{Error, Result};
use crate::linear::{
    relabel, BasisTag, Mode, ModeTransform, PhotonState, QubitMatrix, TimeWindow, MAX_PATHS,
};

pub const DEFAULT_SWITCH_LOSS_DB: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Polarization,
    DualRail,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Polarization => "polarization",
            Scheme::DualRail => "dualrail",
        }
    }

    /// Stage carrying the long arm of the input interferometer. A phase
    /// error here multiplies the early bin: `U · diag(e^{iδ}, 1)`.
    pub fn input_arm_stage(self) -> &'static str {
        match self {
            Scheme::Polarization => "delay_lower",
            Scheme::DualRail => "delay_upper",
        }
    }

    /// Stage carrying the long arm of the output interferometer.
    pub fn output_arm_stage(self) -> &'static str {
        match self {
            Scheme::Polarization => "delay_upper",
            Scheme::DualRail => "delay_lower",
        }
    }

    /// Stage labels in circuit order.
    pub fn stage_labels(self) -> &'static [&'static str] {
        match self {
            Scheme::Polarization => &[
                "sw_in",
                "pc_flip_in",
                "delay_lower",
                "pbsc_in",
                "pc",
                "pbsc_out",
                "delay_upper",
                "pc_flip_out",
                "sw_out",
            ],
            Scheme::DualRail => &["sw_in", "delay_upper", "ps1", "vc", "ps2", "delay_lower", "sw_out"],
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polarization" => Ok(Scheme::Polarization),
            "dualrail" => Ok(Scheme::DualRail),
            _ => Err(Error::InvalidInput(format!("unknown scheme '{s}', expected polarization or dualrail"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageKind {
    Switch,
    Combiner,
    Delay,
    PhaseShifter,
    Coupler,
    PolarizationController,
    PbscCombine,
    PbscSplit,
    Relabel,
}

impl StageKind {
    pub fn has_extinction(self) -> bool {
        matches!(self, StageKind::Switch | StageKind::Combiner | StageKind::PbscCombine | StageKind::PbscSplit)
    }

    fn is_switch(self) -> bool {
        matches!(self, StageKind::Switch | StageKind::Combiner)
    }
}

/// Per-stage deviations from ideal behaviour. Unset fields fall back to the
/// defaults of [`Imperfections`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageImperfection {
    pub loss_db: Option<f64>,
    pub extinction_db: Option<f64>,
    /// Static phase error (rad) added on the stage's arm.
    pub phase_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedImperfection {
    pub loss_db: f64,
    pub extinction_db: f64,
    pub phase_error: f64,
}

/// Imperfection model for a whole circuit.
///
/// Switches lose [`DEFAULT_SWITCH_LOSS_DB`] per pass unless overridden;
/// everything else is ideal by default.
#[derive(Debug, Clone, PartialEq)]
pub struct Imperfections {
    pub switch_loss_db: f64,
    pub extinction_db: f64,
    pub stages: BTreeMap<String, StageImperfection>,
    /// Rotation (rad) of the input polarization away from H, polarization
    /// gate only.
    pub input_misalignment: f64,
}

impl Default for Imperfections {
    fn default() -> Self {
        Imperfections {
            switch_loss_db: DEFAULT_SWITCH_LOSS_DB,
            extinction_db: f64::INFINITY,
            stages: BTreeMap::new(),
            input_misalignment: 0.0,
        }
    }
}

impl Imperfections {
    pub fn ideal() -> Self {
        Imperfections { switch_loss_db: 0.0, ..Default::default() }
    }

    pub fn with_stage(mut self, label: &str, imp: StageImperfection) -> Self {
        self.stages.insert(label.to_owned(), imp);
        self
    }

    pub fn with_phase_error(mut self, label: &str, phase_error: f64) -> Self {
        self.stages.entry(label.to_owned()).or_default().phase_error = phase_error;
        self
    }

    pub fn resolve(&self, label: &str, kind: StageKind) -> ResolvedImperfection {
        let o = self.stages.get(label).copied().unwrap_or_default();
        let default_loss = if kind.is_switch() { self.switch_loss_db } else { 0.0 };
        let default_ext = if kind.has_extinction() { self.extinction_db } else { f64::INFINITY };
        ResolvedImperfection {
            loss_db: o.loss_db.unwrap_or(default_loss),
            extinction_db: o.extinction_db.unwrap_or(default_ext),
            phase_error: o.phase_error,
        }
    }
}

/// Settings of the dual-rail gate: `e^{iγ} P(θ₂) B(ω) P(θ₁)` with
/// `ω = asin √η`. The global phase `γ` is bookkeeping only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualRailSettings {
    pub eta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub gamma: f64,
}

impl DualRailSettings {
    pub fn identity() -> Self {
        DualRailSettings { eta: 0.0, theta1: 0.0, theta2: 0.0, gamma: 0.0 }
    }

    /// `P(θ₂) B(ω) P(θ₁)` without the global phase.
    pub fn matrix(&self) -> QubitMatrix {
        let b = components::coupler_matrix(coupling_angle(self.eta));
        (QubitMatrix::phase_first(self.theta2) * b * QubitMatrix::phase_first(self.theta1)).with_basis(BasisTag::DualRail)
    }
}

/// Settings of the polarization gate: the Jones matrix of the middle
/// controller in `(H, V)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationSettings {
    pub jones: QubitMatrix,
    pub gamma: f64,
}

impl PolarizationSettings {
    pub fn identity() -> Self {
        PolarizationSettings { jones: QubitMatrix::identity().with_basis(BasisTag::Polarization), gamma: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSettings {
    Polarization(PolarizationSettings),
    DualRail(DualRailSettings),
}

impl GateSettings {
    pub fn scheme(&self) -> Scheme {
        match self {
            GateSettings::Polarization(_) => Scheme::Polarization,
            GateSettings::DualRail(_) => Scheme::DualRail,
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            GateSettings::Polarization(p) => p.gamma,
            GateSettings::DualRail(d) => d.gamma,
        }
    }

    pub fn identity(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Polarization => GateSettings::Polarization(PolarizationSettings::identity()),
            Scheme::DualRail => GateSettings::DualRail(DualRailSettings::identity()),
        }
    }
}

/// Window and imperfections used when building a circuit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BuildOptions {
    pub window: TimeWindow,
    pub imperfections: Imperfections,
}

impl BuildOptions {
    pub fn ideal() -> Self {
        BuildOptions { window: TimeWindow::default(), imperfections: Imperfections::ideal() }
    }

    pub fn with_imperfections(imperfections: Imperfections) -> Self {
        BuildOptions { window: TimeWindow::default(), imperfections }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub label: String,
    pub kind: StageKind,
    pub loss_db: f64,
    pub transform: ModeTransform,
}

/// An immutable, ordered list of stages with a declared input port and
/// output qubit basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    stages: Vec<Stage>,
    inputs: Vec<Mode>,
    outputs: [Mode; 2],
    window: TimeWindow,
}

impl CircuitSpec {
    pub fn new(stages: Vec<Stage>, inputs: Vec<Mode>, outputs: [Mode; 2], window: TimeWindow) -> Result<Self> {
        if outputs[0] == outputs[1] {
            return Err(Error::DuplicateMode(outputs[0].clone()));
        }
        let mut paths = BTreeSet::new();
        for st in &stages {
            paths.extend(st.transform.touched_modes().into_iter().map(|m| m.path));
        }
        paths.extend(inputs.iter().chain(outputs.iter()).map(|m| m.path.clone()));
        if paths.len() > MAX_PATHS {
            return Err(Error::TooManyPaths(paths.len()));
        }
        Ok(CircuitSpec { stages, inputs, outputs, window })
    }

    /// A circuit with no stages whose output basis equals its input.
    pub fn empty(path: &str, window: TimeWindow) -> Self {
        let (s, l) = (Mode::h(path, 0), Mode::h(path, 1));
        CircuitSpec { stages: Vec::new(), inputs: vec![s.clone(), l.clone()], outputs: [s, l], window }
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage(&self, label: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.label == label)
    }

    pub fn inputs(&self) -> &[Mode] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Mode; 2] {
        &self.outputs
    }

    pub fn window(&self) -> TimeWindow {
        self.window
    }

    /// Runs the stages in order.
    pub fn run(&self, state: &PhotonState) -> Result<PhotonState> {
        if let Some(m) = state.modes().find(|m| !self.inputs.contains(m)) {
            return Err(Error::InvalidInput(format!("mode {m} is not an input of this circuit")));
        }
        self.stages.iter().try_fold(state.clone(), |s, st| st.transform.apply(&s))
    }

    /// The whole circuit as one transform.
    pub fn transform(&self) -> ModeTransform {
        self.stages.iter().fold(ModeTransform::identity(), |acc, st| st.transform.after(&acc))
    }

    /// 2×2 map from the input basis to the declared output basis. Columns
    /// are output amplitudes; anything not landing on an output mode shows up
    /// as a column-norm deficit.
    pub fn effective_qubit_map(&self) -> Result<QubitMatrix> {
        if self.inputs.len() != 2 {
            return Err(Error::InvalidInput("circuit does not take a qubit input".into()));
        }
        let mut m = QubitMatrix::zeros();
        for (j, input) in self.inputs.iter().enumerate() {
            let out = self.run(&PhotonState::single(input.clone()))?;
            for (i, o) in self.outputs.iter().enumerate() {
                m.m[i][j] = out.amplitude(o);
            }
        }
        Ok(m)
    }

    /// Modes that can carry amplitude just before each stage, plus the set
    /// after the last stage. Derived from the sparsity pattern only.
    pub fn reachable_sets(&self) -> Result<Vec<Vec<Mode>>> {
        let mut sets = vec![self.inputs.clone()];
        for st in &self.stages {
            let mut next = BTreeSet::new();
            for m in sets.last().map(Vec::as_slice).unwrap_or_default() {
                next.extend(st.transform.image(m)?.into_iter().map(|(o, _)| o));
            }
            sets.push(next.into_iter().collect());
        }
        Ok(sets)
    }

    /// Union of [`reachable_sets`](Self::reachable_sets) and the declared
    /// outputs, sorted.
    pub fn reachable_basis(&self) -> Result<Vec<Mode>> {
        let mut all: BTreeSet<Mode> = self.outputs.iter().cloned().collect();
        for set in self.reachable_sets()? {
            all.extend(set);
        }
        Ok(all.into_iter().collect())
    }

    /// Product of dense stage matrices on `basis`, last stage leftmost.
    ///
    /// Each stage contributes its true columns for the modes reachable in
    /// front of it and zero columns elsewhere, so the product is exact on
    /// every state supported on the circuit inputs. `basis` must contain
    /// [`reachable_basis`](Self::reachable_basis).
    pub fn dense_matrix(&self, basis: &[Mode]) -> Result<DMatrix<Complex64>> {
        let n = basis.len();
        let index: BTreeMap<&Mode, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let sets = self.reachable_sets()?;
        let mut acc = DMatrix::<Complex64>::identity(n, n);
        for (st, cols) in self.stages.iter().zip(&sets) {
            let block = st.transform.dense_block(basis, cols)?;
            let mut full = DMatrix::<Complex64>::zeros(n, n);
            for (k, m) in cols.iter().enumerate() {
                let col = *index.get(m).ok_or_else(|| Error::BasisIncomplete(m.clone()))?;
                full.set_column(col, &block.column(k));
            }
            acc = full * acc;
        }
        Ok(acc)
    }

    /// Feeds this circuit's output qubit into `next`, inserting a relabel
    /// stage that moves the output bins onto `next`'s input bins.
    pub fn then(&self, next: &CircuitSpec) -> Result<CircuitSpec> {
        if next.inputs.len() != 2 {
            return Err(Error::InvalidInput("next circuit does not take a qubit input".into()));
        }
        let (from, to) = (&self.outputs[0], &next.inputs[0]);
        if self.outputs[1].path != from.path
            || next.inputs[1].path != to.path
            || self.outputs[1].slot != from.slot + 1
            || next.inputs[1].slot != to.slot + 1
        {
            return Err(Error::InvalidInput("qubit bins must be adjacent slots on one path".into()));
        }
        let mut stages = self.stages.clone();
        let shift = i64::from(to.slot) - i64::from(from.slot);
        if from.path != to.path || shift != 0 {
            stages.push(Stage {
                label: format!("link_{}_{}", from.path, to.path),
                kind: StageKind::Relabel,
                loss_db: 0.0,
                transform: relabel(&from.path, &to.path, shift, self.window),
            });
        }
        stages.extend(next.stages.iter().cloned());
        CircuitSpec::new(stages, self.inputs.clone(), next.outputs.clone(), self.window)
    }
}

/// Collects stages and folds each stage's imperfections into its transform.
struct Assembler<'a> {
    window: TimeWindow,
    imp: &'a Imperfections,
    stages: Vec<Stage>,
}

impl<'a> Assembler<'a> {
    fn new(opts: &'a BuildOptions) -> Self {
        Assembler { window: opts.window, imp: &opts.imperfections, stages: Vec::new() }
    }

    fn push<F>(&mut self, label: &str, kind: StageKind, arm: &str, build: F) -> Result<()>
    where
        F: FnOnce(TimeWindow, ResolvedImperfection) -> Result<ModeTransform>,
    {
        let r = self.imp.resolve(label, kind);
        let mut t = build(self.window, r)?;
        if r.phase_error != 0.0 {
            t = components::phase_shifter(self.window, arm, r.phase_error, 0.0)?.after(&t);
        }
        self.stages.push(Stage { label: label.to_owned(), kind, loss_db: r.loss_db, transform: t });
        Ok(())
    }

    fn finish(self, inputs: Vec<Mode>, outputs: [Mode; 2]) -> Result<CircuitSpec> {
        CircuitSpec::new(self.stages, inputs, outputs, self.window)
    }
}

fn qubit_io(window: TimeWindow) -> Result<(Vec<Mode>, [Mode; 2])> {
    window.check("out", 2)?;
    Ok((vec![Mode::h("in", 0), Mode::h("in", 1)], [Mode::h("out", 1), Mode::h("out", 2)]))
}

/// Time-bin source: a variable coupler splits the photon into a short and
/// a long arm, a phase shifter on the long arm sets the relative phase, and
/// a switch merges both arms into path `out`.
///
/// `ps_phase` is the raw phase-shifter setting. The cross port of the
/// coupler already carries a factor `i`, so the long-bin phase is
/// `ps_phase + π/2`.
pub fn prepare_timebin_raw(alpha: f64, ps_phase: f64, opts: &BuildOptions) -> Result<CircuitSpec> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidAmplitude(alpha));
    }
    // cos ω = α  ⇒  η = sin² ω = 1 − α²
    let eta = (1.0 - alpha * alpha).clamp(0.0, 1.0);
    let mut a = Assembler::new(opts);
    a.push("vc", StageKind::Coupler, "long", |w, r| components::variable_coupler(w, "short", "long", eta, r.loss_db))?;
    a.push("delay_long", StageKind::Delay, "long", |w, r| components::delay(w, "long", 1, r.loss_db))?;
    a.push("ps", StageKind::PhaseShifter, "long", |w, r| components::phase_shifter(w, "long", ps_phase, r.loss_db))?;
    a.push("sw", StageKind::Combiner, "out", |w, r| {
        components::combiner(w, "short", "long", "out", &RouteTable::single(w, 0), r.loss_db, r.extinction_db)
    })?;
    a.finish(vec![Mode::h("short", 0)], [Mode::h("out", 0), Mode::h("out", 1)])
}

/// Source circuit for `α|s⟩ + e^{iφ}√(1−α²)|l⟩`, H-polarized on path `out`.
pub fn prepare_timebin(alpha: f64, phi: f64, opts: &BuildOptions) -> Result<CircuitSpec> {
    prepare_timebin_raw(alpha, phi - FRAC_PI_2, opts)
}

/// Input state of [`prepare_timebin`] circuits.
pub fn source_state() -> PhotonState {
    PhotonState::single(Mode::h("short", 0))
}

/// Time-bin gate through a polarization qubit.
///
/// The input switch sends `|s⟩` to the lower branch and `|l⟩` to the upper
/// one. The lower branch is flipped to V and delayed one bin, and the PBSC
/// merges both branches into a single-rail polarization qubit with
/// `|s⟩ → |V⟩`, `|l⟩ → |H⟩`. The middle controller applies `jones`; the
/// mirror-image section converts back to an H-polarized time-bin qubit.
pub fn polarization_gate(settings: &PolarizationSettings, opts: &BuildOptions) -> Result<CircuitSpec> {
    let (inputs, outputs) = qubit_io(opts.window)?;
    let flip = QubitMatrix::pauli_x().with_basis(BasisTag::Polarization);
    let mut a = Assembler::new(opts);
    let tilt = opts.imperfections.input_misalignment;
    if tilt != 0.0 {
        let (s, c) = tilt.sin_cos();
        let rot = QubitMatrix::from_rows(c.into(), (-s).into(), s.into(), c.into());
        a.push("input_misalignment", StageKind::PolarizationController, "in", |w, _| {
            components::polarization_controller(w, "in", &rot, 0.0)
        })?;
    }
    a.push("sw_in", StageKind::Switch, "lower", |w, r| {
        components::switch(w, "in", "lower", "upper", &RouteTable::single(w, 0), r.loss_db, r.extinction_db)
    })?;
    a.push("pc_flip_in", StageKind::PolarizationController, "lower", |w, r| {
        components::polarization_controller(w, "lower", &flip, r.loss_db)
    })?;
    a.push("delay_lower", StageKind::Delay, "lower", |w, r| components::delay(w, "lower", 1, r.loss_db))?;
    a.push("pbsc_in", StageKind::PbscCombine, "mid", |w, r| {
        components::pbsc_combine(w, "upper", "lower", "mid", r.loss_db, r.extinction_db)
    })?;
    a.push("pc", StageKind::PolarizationController, "mid", |w, r| {
        components::polarization_controller(w, "mid", &settings.jones, r.loss_db)
    })?;
    a.push("pbsc_out", StageKind::PbscSplit, "upper", |w, r| {
        components::pbsc_split(w, "mid", "upper", "lower", r.loss_db, r.extinction_db)
    })?;
    a.push("delay_upper", StageKind::Delay, "upper", |w, r| components::delay(w, "upper", 1, r.loss_db))?;
    a.push("pc_flip_out", StageKind::PolarizationController, "lower", |w, r| {
        components::polarization_controller(w, "lower", &flip, r.loss_db)
    })?;
    a.push("sw_out", StageKind::Combiner, "out", |w, r| {
        components::combiner(w, "lower", "upper", "out", &RouteTable::single(w, 1), r.loss_db, r.extinction_db)
    })?;
    a.finish(inputs, outputs)
}

/// Time-bin gate through a dual-rail qubit.
///
/// The input switch sends `|s⟩` to the upper branch and `|l⟩` to the lower
/// one; delaying the upper branch aligns both, giving `|s⟩ → |1⟩_u|0⟩_l`
/// and `|l⟩ → |0⟩_u|1⟩_l`. `P(θ₁)`, the coupler and `P(θ₂)` act on the
/// dual-rail qubit, then a delay on the lower branch and a reversed switch
/// restore a time-bin qubit.
pub fn dualrail_gate(settings: &DualRailSettings, opts: &BuildOptions) -> Result<CircuitSpec> {
    let (inputs, outputs) = qubit_io(opts.window)?;
    let mut a = Assembler::new(opts);
    a.push("sw_in", StageKind::Switch, "upper", |w, r| {
        components::switch(w, "in", "upper", "lower", &RouteTable::single(w, 0), r.loss_db, r.extinction_db)
    })?;
    a.push("delay_upper", StageKind::Delay, "upper", |w, r| components::delay(w, "upper", 1, r.loss_db))?;
    a.push("ps1", StageKind::PhaseShifter, "upper", |w, r| {
        components::phase_shifter(w, "upper", settings.theta1, r.loss_db)
    })?;
    a.push("vc", StageKind::Coupler, "upper", |w, r| {
        components::variable_coupler(w, "upper", "lower", settings.eta, r.loss_db)
    })?;
    a.push("ps2", StageKind::PhaseShifter, "upper", |w, r| {
        components::phase_shifter(w, "upper", settings.theta2, r.loss_db)
    })?;
    a.push("delay_lower", StageKind::Delay, "lower", |w, r| components::delay(w, "lower", 1, r.loss_db))?;
    a.push("sw_out", StageKind::Combiner, "out", |w, r| {
        components::combiner(w, "upper", "lower", "out", &RouteTable::single(w, 1), r.loss_db, r.extinction_db)
    })?;
    a.finish(inputs, outputs)
}

pub fn build_gate(settings: &GateSettings, opts: &BuildOptions) -> Result<CircuitSpec> {
    match settings {
        GateSettings::Polarization(p) => polarization_gate(p, opts),
        GateSettings::DualRail(d) => dualrail_gate(d, opts),
    }
}
