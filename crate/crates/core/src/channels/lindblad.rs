use crate::error::{Error, Result};
use crate::gates::HamiltonianTerm;
use crate::linalg::{self, Operator, C64};
use crate::qstate::{DensityMatrix, PauliString};

/// Jump operator c with rate γ ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTerm {
    pub jump: Operator,
    pub rate: f64,
}

impl LindbladTerm {
    pub fn new(jump: Operator, rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::Domain(format!("rate must be finite and non-negative, got {rate}")));
        }
        if jump.nrows() != jump.ncols() {
            return Err(Error::Domain("jump operator must be square".into()));
        }
        Ok(LindbladTerm { jump, rate })
    }

    /// c = F·½(1 − A).
    pub fn pump(stabilizer: &PauliString, flip: &PauliString, rate: f64) -> Result<Self> {
        let d = 1usize << stabilizer.num_qubits();
        let p_minus = (linalg::identity(d) - stabilizer.to_matrix()) * C64::new(0.5, 0.0);
        Self::new(flip.to_matrix() * p_minus, rate)
    }
}

/// dρ/dt = −i[H, ρ] + Σ γ (c ρ c† − ½{c†c, ρ}).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MasterEquation {
    pub hamiltonian_terms: Vec<HamiltonianTerm>,
    pub lindblad_terms: Vec<LindbladTerm>,
}

impl MasterEquation {
    pub fn new(hamiltonian_terms: Vec<HamiltonianTerm>, lindblad_terms: Vec<LindbladTerm>) -> Result<Self> {
        let eq = MasterEquation { hamiltonian_terms, lindblad_terms };
        eq.num_qubits()?;
        Ok(eq)
    }

    /// Shared qubit count of all terms (None for an empty equation).
    pub fn num_qubits(&self) -> Result<Option<usize>> {
        let mut n = None;
        let dims = self
            .hamiltonian_terms
            .iter()
            .map(|h| Ok(h.string.num_qubits()))
            .chain(self.lindblad_terms.iter().map(|l| linalg::num_qubits_for_dim(l.jump.nrows())));
        for m in dims {
            let m = m?;
            match n {
                None => n = Some(m),
                Some(k) if k != m => return Err(Error::QubitMismatch { expected: k, found: m }),
                _ => {}
            }
        }
        Ok(n)
    }

    pub fn hamiltonian(&self, d: usize) -> Operator {
        let mut h = Operator::zeros(d, d);
        for t in &self.hamiltonian_terms {
            h += t.to_matrix();
        }
        h
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        if let Some(n) = self.num_qubits()? {
            if n != rho.num_qubits() {
                return Err(Error::QubitMismatch { expected: n, found: rho.num_qubits() });
            }
        }
        Ok(())
    }
}

struct Generator {
    h: Operator,
    jumps: Vec<(Operator, Operator, f64)>,
}

impl Generator {
    fn new(eq: &MasterEquation, d: usize) -> Self {
        Generator {
            h: eq.hamiltonian(d),
            jumps: eq
                .lindblad_terms
                .iter()
                .map(|l| (l.jump.clone(), l.jump.adjoint() * &l.jump, l.rate))
                .collect(),
        }
    }

    fn rhs(&self, rho: &Operator) -> Operator {
        let mi = C64::new(0.0, -1.0);
        let mut out = (&self.h * rho - rho * &self.h) * mi;
        for (c, cdc, rate) in &self.jumps {
            let g = C64::new(*rate, 0.0);
            let anti = cdc * rho + rho * cdc;
            out += (c * rho * c.adjoint() - anti * C64::new(0.5, 0.0)) * g;
        }
        out
    }
}

pub fn lindblad_rhs(rho: &DensityMatrix, eq: &MasterEquation) -> Result<Operator> {
    eq.check_dim(rho)?;
    Ok(Generator::new(eq, rho.dim()).rhs(rho.matrix()))
}

/// Fixed-step RK4 from 0 to `t_final`. The number of steps is
/// `ceil(t_final / dt)` with the step shrunk to land on `t_final` exactly.
pub fn integrate_master_equation(
    rho0: &DensityMatrix,
    eq: &MasterEquation,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    eq.check_dim(rho0)?;
    if !(dt > 0.0) || !(t_final >= 0.0) || dt > t_final && t_final > 0.0 {
        return Err(Error::Domain(format!("need 0 < dt <= t_final, got dt={dt}, t_final={t_final}")));
    }
    if t_final == 0.0 {
        return Ok(rho0.clone());
    }
    let steps = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let gen = Generator::new(eq, rho0.dim());
    let mut rho = rho0.matrix().clone();
    let half = C64::new(h / 2.0, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    for _ in 0..steps {
        let k1 = gen.rhs(&rho);
        let k2 = gen.rhs(&(&rho + &k1 * half));
        let k3 = gen.rhs(&(&rho + &k2 * half));
        let k4 = gen.rhs(&(&rho + &k3 * full));
        rho += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    let drift = (linalg::trace(&rho) - linalg::trace(rho0.matrix())).norm();
    if drift > 1e-6 {
        return Err(Error::Accuracy { drift });
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho0.num_qubits(), rho))
}
