//! Gaussian gate-angle noise, Monte Carlo over repeated noisy pumping, and
//! the dephasing limit of a noisy coherent block.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{integrate_master_equation, LindbladTerm, MasterEquation};
use crate::circuits::{coherent_block, decompose_correcting_gate, Circuit};
use crate::error::{Error, Result};
use crate::gates::{Axis, CorrectionRow, GateOp, HamiltonianTerm};
use crate::linalg::{self, Operator, C64};
use crate::qstate::{DensityMatrix, Pauli, PauliString, StateVector};

/// How a configured spread value maps onto the Gaussian width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpreadConvention {
    /// The value is the standard deviation.
    #[default]
    StdDev,
    /// The value is the variance.
    Variance,
}

/// Which gates receive angle noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseTargets {
    /// The addressed z-axis π pulses on the ancilla and the flip ion.
    #[default]
    AddressedFlips,
    /// Every MS gate angle. Not used by any reference numbers.
    MsGates,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub targets: NoiseTargets,
    pub mean_shift: f64,
    pub std_dev: f64,
    /// Fresh draw for every gate; otherwise one draw per trajectory step is
    /// shared by all targeted gates.
    pub independent: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { targets: NoiseTargets::AddressedFlips, mean_shift: 0.0, std_dev: 0.0, independent: true }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn from_spread(spread: f64, convention: SpreadConvention) -> Result<Self> {
        if !(spread >= 0.0) || !spread.is_finite() {
            return Err(Error::Domain(format!("spread must be finite and non-negative, got {spread}")));
        }
        let std_dev = match convention {
            SpreadConvention::StdDev => spread,
            SpreadConvention::Variance => spread.sqrt(),
        };
        Ok(NoiseModel { std_dev, ..Self::default() })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.std_dev >= 0.0) || !self.std_dev.is_finite() || !self.mean_shift.is_finite() {
            return Err(Error::Domain("noise parameters must be finite with std_dev >= 0".into()));
        }
        Ok(())
    }
}

/// nominal + mean_shift + std_dev·N(0, 1). The normal draw uses the ziggurat
/// sampler of `rand_distr`.
pub fn sample_angle<R: Rng + ?Sized>(nominal: f64, model: &NoiseModel, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    nominal + model.mean_shift + model.std_dev * z
}

/// One pump step on 4 system ions plus ancilla: global MS(π/2), the
/// controlled flip of ion 4 decomposed into a two-ion MS built from global
/// quarter-angle gates and addressed π pulses, global MS(−π/2), reset.
pub fn ghz_pump_circuit(theta: f64) -> Result<Circuit> {
    let n = 5;
    let all: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n).with_target(format!("pump +XXXX, theta {theta}, flip on ion 4"));
    c.push(GateOp::ms(&all, FRAC_PI_2, 0.0))?;
    c.append(&decompose_correcting_gate(CorrectionRow::Row4, theta, 4, n, true)?)?;
    c.push(GateOp::ms(&all, -FRAC_PI_2, 0.0))?;
    c.push(GateOp::Reset { qubit: 0 })?;
    Ok(c)
}

fn is_target(op: &GateOp, targets: NoiseTargets) -> bool {
    match (targets, op) {
        (NoiseTargets::AddressedFlips, GateOp::Rot { axis: Axis::Z, angle, .. }) => (angle.abs() - PI).abs() < 1e-12,
        (NoiseTargets::MsGates, GateOp::Ms { .. }) => true,
        _ => false,
    }
}

fn perturbed(op: &GateOp, model: &NoiseModel, shared: Option<f64>, rng: &mut ChaCha8Rng) -> GateOp {
    let draw = |nominal: f64, rng: &mut ChaCha8Rng| match shared {
        Some(z) => nominal + model.mean_shift + model.std_dev * z,
        None => sample_angle(nominal, model, rng),
    };
    match op {
        GateOp::Rot { axis, angle, qubit } => GateOp::Rot { axis: *axis, angle: draw(*angle, rng), qubit: *qubit },
        GateOp::Ms { targets, theta, phi } => GateOp::Ms { targets: targets.clone(), theta: draw(*theta, rng), phi: *phi },
        other => other.clone(),
    }
}

/// Observables recorded per step: the stabilizer and the six σzσz pairs.
pub fn ghz_observables() -> Vec<(String, PauliString)> {
    let n = 5;
    let mut out = vec![("A".to_string(), PauliString::uniform(n, &[1, 2, 3, 4], Pauli::X).expect("fixed"))];
    for i in 1..=4 {
        for j in i + 1..=4 {
            out.push((format!("Z{i}Z{j}"), PauliString::uniform(n, &[i, j], Pauli::Z).expect("fixed")));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub theta: f64,
    pub steps: usize,
    pub trajectories: usize,
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { theta: FRAC_PI_2, steps: 6, trajectories: 10_000, seed: 2011, workers: 0 }
    }
}

/// Averaged series of a Monte Carlo run. Index 0 of every series is the
/// initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub steps: usize,
    pub trajectory_count: usize,
    pub labels: Vec<String>,
    /// mean[step][observable]
    pub mean: Vec<Vec<f64>>,
    /// Standard error of the mean, same layout.
    pub stderr: Vec<Vec<f64>>,
    /// values[trajectory][step][observable]
    #[serde(skip)]
    pub per_trajectory: Vec<Vec<Vec<f64>>>,
}

impl RunRecord {
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let k = self.labels.iter().position(|l| l == label)?;
        Some(self.mean.iter().map(|row| row[k]).collect())
    }

    /// `step,observable,mean,stderr` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,observable,mean,stderr\n");
        for (step, (m, e)) in self.mean.iter().zip(&self.stderr).enumerate() {
            for (k, label) in self.labels.iter().enumerate() {
                s.push_str(&format!("{step},{label},{:.16e},{:.16e}\n", m[k], e[k]));
            }
        }
        s
    }

    /// `trajectory,step,observable,value`.
    pub fn trajectories_csv(&self) -> String {
        let mut s = String::from("trajectory,step,observable,value\n");
        for (t, steps) in self.per_trajectory.iter().enumerate() {
            for (step, vals) in steps.iter().enumerate() {
                for (k, label) in self.labels.iter().enumerate() {
                    s.push_str(&format!("{t},{step},{label},{:.16e}\n", vals[k]));
                }
            }
        }
        s
    }

    /// Per-trajectory value of mean(ZiZ4) − mean(ZiZj, i,j≠4) at `step`.
    pub fn flip_ion_gap(&self, step: usize) -> Vec<f64> {
        let idx = |l: &str| self.labels.iter().position(|x| x == l).expect("label");
        let with4: Vec<usize> = ["Z1Z4", "Z2Z4", "Z3Z4"].iter().map(|l| idx(l)).collect();
        let without: Vec<usize> = ["Z1Z2", "Z1Z3", "Z2Z3"].iter().map(|l| idx(l)).collect();
        self.per_trajectory
            .iter()
            .map(|t| {
                let v = &t[step];
                with4.iter().map(|&k| v[k]).sum::<f64>() / 3.0 - without.iter().map(|&k| v[k]).sum::<f64>() / 3.0
            })
            .collect()
    }
}

fn trajectory_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_trajectory(
    circuit: &Circuit,
    noisy: &[bool],
    model: &NoiseModel,
    observables: &[(String, PauliString)],
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>> {
    let mut psi = StateVector::new_basis_state(5, "01111")?;
    let record = |psi: &StateVector| -> Result<Vec<f64>> {
        observables.iter().map(|(_, p)| psi.expectation(p)).collect()
    };
    let mut out = Vec::with_capacity(steps + 1);
    out.push(record(&psi)?);
    for _ in 0..steps {
        let shared = if model.independent { None } else { Some(rng.sample(StandardNormal)) };
        for (op, &is_noisy) in circuit.ops().iter().zip(noisy) {
            match op {
                GateOp::Reset { qubit } => psi.reset_qubit(*qubit, rng),
                _ if is_noisy && model.targets != NoiseTargets::None => {
                    perturbed(op, model, shared, rng).apply(&mut psi)?
                }
                _ => op.apply(&mut psi)?,
            }
        }
        out.push(record(&psi)?);
    }
    Ok(out)
}

/// Repeated noisy pumping of |1111⟩ towards the GHZ state, as pure-state
/// trajectories. Trajectory `t` draws from ChaCha8 seeded with `seed` on
/// stream `t`, and means are summed in trajectory order, so the record does
/// not depend on the worker count.
pub fn repeated_pumping_mc(config: &McConfig, model: &NoiseModel) -> Result<RunRecord> {
    if config.trajectories == 0 {
        return Err(Error::Domain("need at least one trajectory".into()));
    }
    model.validate()?;
    let circuit = ghz_pump_circuit(config.theta)?;
    let noisy: Vec<bool> = circuit.ops().iter().map(|op| is_target(op, model.targets)).collect();
    let observables = ghz_observables();
    let work = || {
        (0..config.trajectories)
            .into_par_iter()
            .map(|t| {
                let mut rng = trajectory_rng(config.seed, t);
                run_trajectory(&circuit, &noisy, model, &observables, config.steps, &mut rng)
            })
            .collect::<Result<Vec<_>>>()
    };
    let per_trajectory = if config.workers == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)?
    };
    let nobs = observables.len();
    let count = config.trajectories as f64;
    let mut mean = vec![vec![0.0; nobs]; config.steps + 1];
    let mut sq = vec![vec![0.0; nobs]; config.steps + 1];
    for traj in &per_trajectory {
        for (s, vals) in traj.iter().enumerate() {
            for (k, v) in vals.iter().enumerate() {
                mean[s][k] += v;
                sq[s][k] += v * v;
            }
        }
    }
    let mut stderr = vec![vec![0.0; nobs]; config.steps + 1];
    for s in 0..=config.steps {
        for k in 0..nobs {
            mean[s][k] /= count;
            let var = if config.trajectories > 1 {
                ((sq[s][k] / count - mean[s][k] * mean[s][k]) * count / (count - 1.0)).max(0.0)
            } else {
                0.0
            };
            stderr[s][k] = (var / count).sqrt();
        }
    }
    Ok(RunRecord {
        seed: config.seed,
        steps: config.steps,
        trajectory_count: config.trajectories,
        labels: observables.into_iter().map(|(l, _)| l).collect(),
        mean,
        stderr,
        per_trajectory,
    })
}

/// Percentile bootstrap interval for the mean of `values`.
pub fn bootstrap_mean_ci(values: &[f64], resamples: usize, level: f64, seed: u64) -> Result<(f64, f64)> {
    if values.is_empty() || resamples == 0 || !(0.0..1.0).contains(&level) {
        return Err(Error::Domain("bootstrap needs values, resamples and a level in (0,1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = values.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    let at = |q: f64| means[((q * (resamples - 1) as f64).round() as usize).min(resamples - 1)];
    Ok((at(alpha), at(1.0 - alpha)))
}

/// Nodes and weights of `n`-point Gauss–Hermite quadrature for the weight
/// e^{−x²}, from the eigen-decomposition of the Jacobi matrix.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = nalgebra::DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = nalgebra::SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], PI.sqrt() * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DephasingReport {
    pub phi0: f64,
    pub sigma: f64,
    pub tau: f64,
    pub probes: usize,
    pub max_trace_distance: f64,
    pub mean_trace_distance: f64,
    /// Set when φ0 or σ is outside the small-angle regime.
    pub warning: Option<String>,
}

/// Average the four-body coherent block over φ ~ N(φ0, σ²) and compare with
/// one RK4 step of length τ of the master equation with H = −(φ0/τ)A and a
/// dephasing jump A at rate σ²/τ. The block runs as a circuit with an
/// ancilla; probes are seeded random pure states.
pub fn dephasing_limit_check(phi0: f64, sigma: f64, tau: f64, probes: usize, seed: u64) -> Result<DephasingReport> {
    if !(tau > 0.0) || !(sigma >= 0.0) || probes == 0 {
        return Err(Error::Domain("need tau > 0, sigma >= 0 and at least one probe".into()));
    }
    let warning = (phi0.abs() > 0.3 || sigma > 0.3)
        .then(|| format!("phi0={phi0}, sigma={sigma} are not small; the comparison is outside its regime"));
    let a = PauliString::uniform(4, &[0, 1, 2, 3], Pauli::X)?;
    let (nodes, weights) = gauss_hermite(24);
    let mut kraus = Vec::with_capacity(nodes.len());
    for (x, w) in nodes.iter().zip(&weights) {
        let phi = phi0 + std::f64::consts::SQRT_2 * sigma * x;
        let u = coherent_block(&a, phi)?.unitary()?;
        let ds = 16;
        let sys = Operator::from_fn(ds, ds, |r, c| u[(r << 1, c << 1)]);
        kraus.push(sys * C64::new((w / PI.sqrt()).sqrt(), 0.0));
        if sigma == 0.0 {
            kraus.truncate(1);
            kraus[0] = Operator::from_fn(ds, ds, |r, c| u[(r << 1, c << 1)]);
            break;
        }
    }
    let eq = MasterEquation::new(
        vec![HamiltonianTerm::new(-phi0 / tau, a.clone())?],
        vec![LindbladTerm::new(a.to_matrix(), sigma * sigma / tau)?],
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for _ in 0..probes {
        let rho = DensityMatrix::from_pure(&StateVector::random(4, &mut rng)?)?;
        let mut avg = Operator::zeros(16, 16);
        for k in &kraus {
            avg += k * rho.matrix() * k.adjoint();
        }
        let lind = integrate_master_equation(&rho, &eq, tau, tau)?;
        let d = linalg::trace_distance(&avg, lind.matrix());
        max = max.max(d);
        sum += d;
    }
    Ok(DephasingReport {
        phi0,
        sigma,
        tau,
        probes,
        max_trace_distance: max,
        mean_trace_distance: sum / probes as f64,
        warning,
    })
}
