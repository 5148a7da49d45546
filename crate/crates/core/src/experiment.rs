//! Declarative experiments: a JSON config in, CSV series and a manifest out.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{integrate_master_equation, stabilizer_pump_channel, trotter_step, KrausChannel};
use crate::circuits::{
    coherent_block, coherent_block_ancilla_free, compare_unitaries, decompose_correcting_gate,
    dissipative_block, qnd_readout, read_stabilizer, realized_flip, refocus_subset_gates,
    refocused_ms_excluding, star_ms, two_ion_ms_via_refocus, Circuit,
};
use crate::error::{Error, Result};
use crate::gates::{backward_ms_as_forward, ms_unitary, CorrectionRow, GateOp};
use crate::linalg::{self, Operator, C64};
use crate::models::{self, color_code_seven, cool_to_ground, logical_prepare_zero, toric_two_plaquette, CodeModel, LogicalGate};
use crate::noise::{self, McConfig, NoiseModel, NoiseTargets, SpreadConvention};
use crate::qstate::{DensityMatrix, Pauli, PauliString, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    VerifyIdentities,
    CoherentEvolve,
    Pump,
    CoolToric,
    CoolColorcode,
    LogicalDemo,
    QndMeasure,
    NoiseMc,
    TrotterVsOde,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::VerifyIdentities => "verify-identities",
            Experiment::CoherentEvolve => "coherent-evolve",
            Experiment::Pump => "pump",
            Experiment::CoolToric => "cool-toric",
            Experiment::CoolColorcode => "cool-colorcode",
            Experiment::LogicalDemo => "logical-demo",
            Experiment::QndMeasure => "qnd-measure",
            Experiment::NoiseMc => "noise-mc",
            Experiment::TrotterVsOde => "trotter-vs-ode",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Width of the angle distribution; see `convention`.
    pub spread: f64,
    #[serde(default)]
    pub convention: SpreadConvention,
    #[serde(default)]
    pub mean_shift: f64,
    #[serde(default)]
    pub targets: NoiseTargets,
    #[serde(default = "yes")]
    pub independent: bool,
}

fn yes() -> bool {
    true
}

impl NoiseConfig {
    pub fn model(&self) -> Result<NoiseModel> {
        let mut m = NoiseModel::from_spread(self.spread, self.convention)?;
        m.mean_shift = self.mean_shift;
        m.targets = self.targets;
        m.independent = self.independent;
        m.validate()?;
        Ok(m)
    }
}

/// Which model `trotter-vs-ode` evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrotterModel {
    Plaquette,
    Toric,
    Colorcode,
}

macro_rules! opt {
    ($($(#[$m:meta])* $name:ident : $ty:ty),* $(,)?) => {
        /// Experiment description. Every parameter is optional and falls
        /// back to the experiment's default; unknown keys are rejected.
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct ExperimentConfig {
            pub experiment: Experiment,
            $(
                $(#[$m])*
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $name: Option<$ty>,
            )*
            #[serde(default, skip_serializing_if = "is_false")]
            pub refocus: bool,
            #[serde(default, skip_serializing_if = "is_false")]
            pub strict_phase: bool,
            #[serde(default, skip_serializing_if = "is_false")]
            pub dump_circuit: bool,
            #[serde(default, skip_serializing_if = "is_false")]
            pub dump_trajectories: bool,
        }

        impl ExperimentConfig {
            pub fn new(experiment: Experiment) -> Self {
                ExperimentConfig {
                    experiment,
                    $($name: None,)*
                    refocus: false,
                    strict_phase: false,
                    dump_circuit: false,
                    dump_trajectories: false,
                }
            }
        }
    };
}

fn is_false(b: &bool) -> bool {
    !*b
}

opt! {
    theta: f64,
    phi: f64,
    tau: f64,
    steps: usize,
    sweeps: usize,
    trajectories: usize,
    seed: u64,
    /// Worker threads for Monte Carlo runs (0 = all cores).
    workers: usize,
    noise: NoiseConfig,
    /// Pump order by stabilizer name.
    schedule: Vec<String>,
    /// Flip qubit per stabilizer name.
    flips: BTreeMap<String, usize>,
    stabilizer: PauliString,
    flip_qubit: usize,
    /// Initial system basis state, qubit 0 first.
    initial: String,
    /// Number of random initial states.
    states: usize,
    rate: f64,
    energy: f64,
    taus: Vec<f64>,
    t_final: f64,
    model: TrotterModel,
    out: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(2011)
    }
}

/// One pass/fail line of the identity suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// A named table of values, written as `step,observable,value`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Series {
    pub rows: Vec<(usize, String, f64)>,
}

impl Series {
    pub fn push(&mut self, step: usize, label: impl Into<String>, value: f64) {
        self.rows.push((step, label.into(), value));
    }

    pub fn get(&self, step: usize, label: &str) -> Option<f64> {
        self.rows.iter().find(|(s, l, _)| *s == step && l == label).map(|r| r.2)
    }

    pub fn last_step(&self) -> usize {
        self.rows.iter().map(|r| r.0).max().unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,observable,value\n");
        for (step, label, v) in &self.rows {
            let _ = writeln!(s, "{step},{label},{v:.16e}");
        }
        s
    }
}

/// Files and printable lines produced by a run.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
    pub lines: Vec<String>,
    pub circuits: Vec<Circuit>,
    pub checks: Vec<IdentityCheck>,
    pub series: Series,
    pub failed: bool,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    experiment: &'static str,
    config: &'a ExperimentConfig,
    seed: u64,
    crate_version: &'static str,
    wall_time_seconds: f64,
    files: Vec<String>,
}

/// Run an experiment and, if `out_dir` is given, write its files plus
/// `manifest.json` there.
pub fn run(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunOutput> {
    let start = Instant::now();
    let mut out = match config.experiment {
        Experiment::VerifyIdentities => run_verify(config)?,
        Experiment::CoherentEvolve => run_coherent(config)?,
        Experiment::Pump => run_pump(config)?,
        Experiment::CoolToric => run_cool_toric(config)?,
        Experiment::CoolColorcode => run_cool_color(config)?,
        Experiment::LogicalDemo => run_logical(config)?,
        Experiment::QndMeasure => run_qnd(config)?,
        Experiment::NoiseMc => run_noise(config)?,
        Experiment::TrotterVsOde => run_trotter(config)?,
    };
    if !out.series.rows.is_empty() {
        out.files.push((format!("{}.csv", config.experiment.name()), out.series.to_csv()));
    }
    if config.dump_circuit {
        let text: String = out.circuits.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n");
        out.files.push(("circuit.txt".into(), text));
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        for (name, body) in &out.files {
            std::fs::write(dir.join(name), body)?;
        }
        let manifest = Manifest {
            experiment: config.experiment.name(),
            config,
            seed: config.seed(),
            crate_version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: start.elapsed().as_secs_f64(),
            files: out.files.iter().map(|f| f.0.clone()).collect(),
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(dir.join("manifest.json"), text)?;
    }
    Ok(out)
}

fn all_x(n: usize) -> PauliString {
    PauliString::uniform(n, &(0..n).collect::<Vec<_>>(), Pauli::X).expect("in range")
}

fn all_y(n: usize) -> PauliString {
    PauliString::uniform(n, &(0..n).collect::<Vec<_>>(), Pauli::Y).expect("in range")
}

fn exp_i_pauli(phi: f64, p: &Operator) -> Operator {
    linalg::identity(p.nrows()) * C64::new(phi.cos(), 0.0) + p * C64::new(0.0, phi.sin())
}

/// Every circuit identity of the toolbox, each compared with a reference
/// built from Pauli-string matrices or the eigendecomposition oracle.
pub fn verify_identities(refocus: bool, strict: bool) -> Result<Vec<IdentityCheck>> {
    let tol = 1e-10;
    let mut checks = Vec::new();
    let prep = |c: Circuit| -> Result<Circuit> { if refocus { refocus_subset_gates(&c) } else { Ok(c) } };
    let mut unitary = |name: String, c: &Circuit, reference: &Operator| -> Result<()> {
        let e = compare_unitaries(&c.unitary()?, reference)?;
        let deviation = e.deviation(strict);
        checks.push(IdentityCheck { name, deviation, tolerance: tol, passed: e.holds(tol, strict) });
        Ok(())
    };
    let z0 = |n: usize| PauliString::single(n + 1, 0, Pauli::Z).expect("in range");
    for (kind, make) in [("x", all_x as fn(usize) -> PauliString), ("y", all_y)] {
        for n in 1..=8 {
            let a = make(n);
            let phi = 0.37;
            let target = exp_i_pauli(phi, &z0(n).mul(&a.shifted(1))?.to_matrix());
            unitary(format!("coherent block {kind}-type n={n}"), &prep(coherent_block(&a, phi)?)?, &target)?;
        }
    }
    for n in 2..=6 {
        let a = all_x(n);
        unitary(
            format!("ancilla-free block n={n}"),
            &coherent_block_ancilla_free(&a, 0.37)?,
            &exp_i_pauli(0.37, &a.to_matrix()),
        )?;
    }
    for n in 3..=5 {
        for theta in [FRAC_PI_4, FRAC_PI_2] {
            let rest: Vec<usize> = (0..n - 1).collect();
            unitary(
                format!("MS excluding one ion n={n} theta={theta:.4}"),
                &refocused_ms_excluding(n - 1, theta, 0.0, n)?,
                &ms_unitary(theta, 0.0, &rest, n)?,
            )?;
            let mut star = linalg::identity(1 << n);
            for i in 1..n {
                star = ms_unitary(theta, 0.0, &[0, i], n)? * star;
            }
            unitary(format!("star MS n={n} theta={theta:.4}"), &star_ms(theta, 0.0, n)?, &star)?;
            unitary(
                format!("two-ion MS n={n} theta={theta:.4}"),
                &two_ion_ms_via_refocus(n - 1, theta, 0.0, n)?,
                &ms_unitary(theta, 0.0, &[0, n - 1], n)?,
            )?;
        }
    }
    for ions in 2..=5 {
        let t: Vec<usize> = (0..ions).collect();
        unitary(
            format!("backward MS from forward gates, {ions} ions"),
            &backward_ms_as_forward(0.6, 0.3, &t, ions)?,
            &ms_unitary(-0.6, 0.3, &t, ions)?,
        )?;
    }
    for row in CorrectionRow::ALL {
        for theta in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2, 2.0] {
            let reference = GateOp::Controlled { row, theta, control: 0, target: 4 }.unitary(5)?;
            unitary(
                format!("C[{}] decomposition theta={theta:.4}", row.index()),
                &decompose_correcting_gate(row, theta, 4, 5, true)?,
                &reference,
            )?;
        }
    }
    for n in 1..=5 {
        for theta in [0.05, FRAC_PI_4, FRAC_PI_2] {
            let a = all_x(n);
            let block = prep(dissipative_block(&a, theta, n - 1)?)?;
            let got = KrausChannel::new(block.system_kraus()?)?;
            let want = stabilizer_pump_channel(&a, &realized_flip(&a, n - 1)?, theta)?;
            let d = linalg::max_abs_diff(&got.choi(), &want.choi());
            checks.push(IdentityCheck {
                name: format!("pump block channel n={n} theta={theta:.4}"),
                deviation: d,
                tolerance: tol,
                passed: d < tol,
            });
        }
    }
    Ok(checks)
}

fn run_verify(config: &ExperimentConfig) -> Result<RunOutput> {
    let checks = verify_identities(config.refocus, config.strict_phase)?;
    let mut out = RunOutput::default();
    let mut csv = String::from("identity,deviation,tolerance,passed\n");
    for c in &checks {
        let _ = writeln!(csv, "{},{:.16e},{:e},{}", c.name, c.deviation, c.tolerance, c.passed);
        out.lines.push(format!("{} {} (deviation {:.2e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.deviation));
    }
    out.failed = checks.iter().any(|c| !c.passed);
    out.files.push(("identities.csv".into(), csv));
    out.checks = checks;
    Ok(out)
}

fn default_stabilizer(config: &ExperimentConfig) -> PauliString {
    config.stabilizer.clone().unwrap_or_else(|| all_x(4))
}

fn initial_state(config: &ExperimentConfig, n: usize, default: &str) -> Result<DensityMatrix> {
    let bits = config.initial.clone().unwrap_or_else(|| default.to_string());
    DensityMatrix::new_basis_state(n, &bits)
}

fn with_ancilla(rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::zero(1)?.tensor(rho)
}

fn lifted(p: &PauliString) -> PauliString {
    p.shifted(1)
}

fn run_coherent(config: &ExperimentConfig) -> Result<RunOutput> {
    let a = default_stabilizer(config);
    let n = a.num_qubits();
    let phi = config.phi.unwrap_or(0.1);
    let steps = config.steps.unwrap_or(10);
    let mut circuit = coherent_block(&a, phi)?;
    if config.refocus {
        circuit = refocus_subset_gates(&circuit)?;
    }
    let sys0 = initial_state(config, n, &"0".repeat(n))?;
    let mut rho = with_ancilla(&sys0)?;
    let exact_u = exp_i_pauli(phi, &a.to_matrix());
    let mut exact = sys0.matrix().clone();
    let mut out = RunOutput::default();
    let z0 = PauliString::single(n + 1, 0, Pauli::Z)?;
    for step in 0..=steps {
        if step > 0 {
            circuit.apply_to_density(&mut rho)?;
            exact = &exact_u * exact * exact_u.adjoint();
        }
        out.series.push(step, "A", rho.expectation(&lifted(&a))?);
        for q in 0..n {
            let zq = PauliString::single(n, q, Pauli::Z)?;
            out.series.push(step, format!("Z{}", q + 1), rho.expectation(&lifted(&zq))?);
        }
        out.series.push(step, "ancilla_Z", rho.expectation(&z0)?);
        let sys = rho.partial_trace(&(1..=n).collect::<Vec<_>>())?;
        out.series.push(step, "distance_to_exact", linalg::trace_distance(sys.matrix(), &exact));
    }
    out.circuits.push(circuit);
    Ok(out)
}

fn run_pump(config: &ExperimentConfig) -> Result<RunOutput> {
    let a = default_stabilizer(config);
    let n = a.num_qubits();
    let theta = config.theta.unwrap_or(FRAC_PI_2);
    let steps = config.steps.unwrap_or(6);
    let support = a.support();
    let flip_qubit = config.flip_qubit.unwrap_or(*support.last().ok_or_else(|| Error::Domain("empty stabilizer".into()))?);
    let mut circuit = dissipative_block(&a, theta, flip_qubit)?;
    if config.refocus {
        circuit = refocus_subset_gates(&circuit)?;
    }
    let mut rho = with_ancilla(&initial_state(config, n, &"1".repeat(n))?)?;
    let mut out = RunOutput::default();
    for step in 0..=steps {
        if step > 0 {
            circuit.apply_to_density(&mut rho)?;
        }
        let value = rho.expectation(&lifted(&a))?;
        out.series.push(step, "A", value);
        out.series.push(step, "weight_plus", (1.0 + value) / 2.0);
        for i in 0..n {
            for j in i + 1..n {
                let zz = PauliString::uniform(n, &[i, j], Pauli::Z)?;
                out.series.push(step, format!("Z{}Z{}", i + 1, j + 1), rho.expectation(&lifted(&zz))?);
            }
        }
    }
    out.circuits.push(circuit);
    Ok(out)
}

fn configured_model(mut model: CodeModel, config: &ExperimentConfig) -> Result<CodeModel> {
    if let Some(flips) = &config.flips {
        for (name, q) in flips {
            model.set_flip(name, *q)?;
        }
    }
    if let Some(schedule) = &config.schedule {
        model.set_schedule(schedule)?;
    }
    model.validate()?;
    Ok(model)
}

fn push_trace(series: &mut Series, trace: &models::CoolingTrace) {
    for (step, row) in trace.rows.iter().enumerate() {
        for (label, v) in trace.labels.iter().zip(row) {
            series.push(step, label.clone(), *v);
        }
    }
}

fn run_cool_toric(config: &ExperimentConfig) -> Result<RunOutput> {
    let model = configured_model(toric_two_plaquette(), config)?;
    let theta = config.theta.unwrap_or(FRAC_PI_2);
    let sweeps = config.sweeps.unwrap_or(10);
    let states = config.states.unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    let mut out = RunOutput::default();
    let mut worst = f64::INFINITY;
    for s in 0..states {
        let psi = StateVector::random_product(model.num_system_qubits, &mut rng)?;
        let (rho, trace) = cool_to_ground(&model, &DensityMatrix::from_pure(&psi)?, theta, sweeps)?;
        if s == 0 {
            push_trace(&mut out.series, &trace);
        }
        worst = worst.min(model.ground_space_weight(&rho)?);
    }
    out.lines.push(format!("minimum ground-space weight over {states} states: {worst:.12}"));
    let last = out.series.last_step();
    out.series.push(last, "ground_weight_min", worst);
    Ok(out)
}

fn run_cool_color(config: &ExperimentConfig) -> Result<RunOutput> {
    let model = configured_model(color_code_seven(), config)?;
    let theta = config.theta.unwrap_or(FRAC_PI_2);
    let sweeps = config.sweeps.unwrap_or(1);
    let rho0 = initial_state(config, model.num_system_qubits, &"0".repeat(7))?;
    let (rho, trace) = cool_to_ground(&model, &rho0, theta, sweeps)?;
    let mut out = RunOutput::default();
    push_trace(&mut out.series, &trace);
    let last = out.series.last_step();
    out.series.push(last, "Zbar", rho.expectation(model.logical_z.as_ref().expect("logical"))?);
    Ok(out)
}

fn run_logical(config: &ExperimentConfig) -> Result<RunOutput> {
    let model = configured_model(color_code_seven(), config)?;
    let theta = config.theta.unwrap_or(FRAC_PI_2);
    let mut rho = logical_prepare_zero(&model, theta)?;
    let mut out = RunOutput::default();
    let record = |out: &mut RunOutput, step: usize, rho: &DensityMatrix| -> Result<()> {
        for (s, v) in model.stabilizers.iter().zip(models::syndrome(rho, &model)?) {
            out.series.push(step, s.name.clone(), v);
        }
        out.series.push(step, "Xbar", rho.expectation(model.logical_x.as_ref().expect("logical"))?);
        out.series.push(step, "Zbar", rho.expectation(model.logical_z.as_ref().expect("logical"))?);
        Ok(())
    };
    record(&mut out, 0, &rho)?;
    for (step, gate) in [LogicalGate::X, LogicalGate::H, LogicalGate::K, LogicalGate::K, LogicalGate::H].into_iter().enumerate() {
        let in_code = models::logical_gate(&model, &mut rho, gate)?;
        if !in_code {
            out.lines.push(format!("warning: {gate:?} applied outside the code space"));
        }
        out.lines.push(format!("step {}: applied {gate:?}", step + 1));
        record(&mut out, step + 1, &rho)?;
    }
    Ok(out)
}

fn run_qnd(config: &ExperimentConfig) -> Result<RunOutput> {
    let a = default_stabilizer(config);
    let n = a.num_qubits();
    let repeats = config.steps.unwrap_or(5);
    let runs = config.trajectories.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    let mut out = RunOutput::default();
    let mut consistent = true;
    let a_full = lifted(&a);
    for run in 0..runs {
        let sys = match &config.initial {
            Some(bits) => StateVector::new_basis_state(n, bits)?,
            None => StateVector::random(n, &mut rng)?,
        };
        let mut psi = StateVector::zero(1)?.tensor(&sys)?;
        let label = format!("run{run}");
        let mut first = None;
        for step in 0..repeats {
            let (outcome, next) = read_stabilizer(&psi, &a, &mut rng)?;
            psi = next;
            consistent &= *first.get_or_insert(outcome) == outcome;
            out.series.push(step, label.clone(), outcome as f64);
        }
        out.series.push(repeats, format!("{label}_A_after"), psi.expectation(&a_full)?);
    }
    out.lines.push(format!("repeated readouts agree in every run: {consistent}"));
    out.failed = !consistent;
    out.circuits.push(qnd_readout(&a)?);
    Ok(out)
}

fn run_noise(config: &ExperimentConfig) -> Result<RunOutput> {
    let mc = McConfig {
        theta: config.theta.unwrap_or(FRAC_PI_2),
        steps: config.steps.unwrap_or(6),
        trajectories: config.trajectories.unwrap_or(10_000),
        seed: config.seed(),
        workers: config.workers.unwrap_or(0),
    };
    let model = match &config.noise {
        Some(n) => n.model()?,
        None => NoiseModel::from_spread(0.3 * FRAC_PI_2, SpreadConvention::StdDev)?,
    };
    let record = noise::repeated_pumping_mc(&mc, &model)?;
    let mut out = RunOutput::default();
    out.files.push(("noise_mc.csv".into(), record.to_csv()));
    if config.dump_trajectories {
        out.files.push(("trajectories.csv".into(), record.trajectories_csv()));
    }
    for (step, row) in record.mean.iter().enumerate() {
        let cells: Vec<String> = record.labels.iter().zip(row).map(|(l, v)| format!("{l}={v:.4}")).collect();
        out.lines.push(format!("step {step}: {}", cells.join(" ")));
    }
    out.circuits.push(noise::ghz_pump_circuit(mc.theta)?);
    Ok(out)
}

fn run_trotter(config: &ExperimentConfig) -> Result<RunOutput> {
    let which = config.model.unwrap_or(TrotterModel::Plaquette);
    let rate = config.rate.unwrap_or(0.5);
    let energy = config.energy.unwrap_or(1.0);
    let t_final = config.t_final.unwrap_or(1.0);
    let taus = config.taus.clone().unwrap_or_else(|| vec![0.2, 0.1, 0.05]);
    let mut model = match which {
        TrotterModel::Plaquette => {
            let spec = models::StabilizerSpec::new("A", all_x(4), 3, energy)?;
            let z = models::StabilizerSpec::new("Z12", PauliString::uniform(4, &[0, 1], Pauli::Z)?, 1, energy)?;
            CodeModel { name: "plaquette".into(), num_system_qubits: 4, stabilizers: vec![spec, z], logical_x: None, logical_z: None }
        }
        TrotterModel::Toric => toric_two_plaquette(),
        TrotterModel::Colorcode => color_code_seven(),
    };
    for s in &mut model.stabilizers {
        s.energy_coefficient = energy;
    }
    let model = configured_model(model, config)?;
    let (eq, mut realizations) = model.pump_equation(rate, true)?;
    realizations.refocus = config.refocus;
    let n = model.num_system_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    let rho0 = match &config.initial {
        Some(bits) => DensityMatrix::new_basis_state(n, bits)?,
        None => DensityMatrix::from_pure(&StateVector::random_product(n, &mut rng)?)?,
    };
    let exact = integrate_master_equation(&rho0, &eq, t_final, 1e-3f64.min(t_final))?;
    let mut out = RunOutput::default();
    for (k, &tau) in taus.iter().enumerate() {
        let steps = (t_final / tau).round().max(1.0) as usize;
        let mut rho = rho0.clone();
        for _ in 0..steps {
            rho = trotter_step(&rho, &eq, tau, &realizations)?;
        }
        let d = rho.trace_distance(&exact)?;
        out.series.push(k, "tau", tau);
        out.series.push(k, "trace_distance", d);
        out.lines.push(format!("tau={tau}: trace distance to RK4 at t={t_final}: {d:.3e}"));
    }
    Ok(out)
}
