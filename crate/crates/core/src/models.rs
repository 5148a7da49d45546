//! The two-plaquette toric code and the seven-qubit color code.
//!
//! Qubit tables (system indices, labels in the figures are index + 1).
//!
//! Toric code, edges of a 2×3-vertex strip:
//!
//! ```text
//!  TL --0-- TM --4-- TR
//!  |        |        |
//!  1   L    3   R    5
//!  |        |        |
//!  BL --2-- BM --6-- BR
//! ```
//!
//! Z plaquettes L = {0,1,2,3}, R = {3,4,5,6}; X stars TL = {0,1},
//! BL = {1,2}, TM = {0,3,4}, BM = {2,3,6}, TR = {4,5}, BR = {5,6}.
//! Each star pump flips σz on an edge that moves the excitation towards BR;
//! the L plaquette hops its excitation onto R through edge 3 and R pushes
//! it out through the boundary edge 5.
//!
//! Color code: plaquettes {0,1,2,3}, {1,2,4,5}, {2,3,5,6} with qubit 2 at
//! the center and corners 0, 4, 6 each belonging to a single plaquette. The
//! pumps flip a corner qubit.

use serde::{Deserialize, Serialize};

use crate::channels::{
    apply_stabilizer_pump, stabilizer_pump_channel, KrausChannel, LindbladTerm, MasterEquation, PumpRealization, Realizations,
};
use crate::circuits::realized_flip;
use crate::error::{Error, Result};
use crate::gates::{HamiltonianTerm, OperatorRegister};
use crate::kernel::Mat2;
use crate::linalg::{Operator, C64, ONE, ZERO};
use crate::qstate::{DensityMatrix, Expectation, Pauli, PauliString, Register};

/// A stabilizer together with the qubit its pump flips.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerSpec {
    pub name: String,
    pub string: PauliString,
    /// System qubit carrying the flip.
    pub flip_qubit: usize,
    /// Flip operator applied on the −1 eigenspace.
    pub flip: PauliString,
    /// E in H = −E·A.
    pub energy_coefficient: f64,
}

impl StabilizerSpec {
    pub fn new(name: &str, string: PauliString, flip_qubit: usize, energy_coefficient: f64) -> Result<Self> {
        let flip = realized_flip(&string, flip_qubit)?;
        let spec = StabilizerSpec { name: name.to_string(), string, flip_qubit, flip, energy_coefficient };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.string.is_hermitian() {
            return Err(Error::Domain(format!("{} is not Hermitian", self.name)));
        }
        if self.string.commutes_with(&self.flip) {
            return Err(Error::Domain(format!("flip of {} commutes with it", self.name)));
        }
        Ok(())
    }

    pub fn pump_channel(&self, theta: f64) -> Result<KrausChannel> {
        stabilizer_pump_channel(&self.string, &self.flip, theta)
    }

    /// Apply the pump map to a density matrix.
    pub fn pump(&self, rho: &DensityMatrix, theta: f64) -> Result<DensityMatrix> {
        apply_stabilizer_pump(rho, &self.string, &self.flip, theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeModel {
    pub name: String,
    pub num_system_qubits: usize,
    /// Pumped in this order by `cool_to_ground`.
    pub stabilizers: Vec<StabilizerSpec>,
    pub logical_x: Option<PauliString>,
    pub logical_z: Option<PauliString>,
}

impl CodeModel {
    pub fn validate(&self) -> Result<()> {
        for s in &self.stabilizers {
            s.validate()?;
            if s.string.num_qubits() != self.num_system_qubits {
                return Err(Error::QubitMismatch { expected: self.num_system_qubits, found: s.string.num_qubits() });
            }
        }
        for (i, a) in self.stabilizers.iter().enumerate() {
            for b in &self.stabilizers[i + 1..] {
                if !a.string.commutes_with(&b.string) {
                    return Err(Error::Domain(format!("{} and {} do not commute", a.name, b.name)));
                }
            }
        }
        for l in self.logical_x.iter().chain(self.logical_z.iter()) {
            if let Some(s) = self.stabilizers.iter().find(|s| !s.string.commutes_with(l)) {
                return Err(Error::Domain(format!("logical {l} anticommutes with {}", s.name)));
            }
        }
        Ok(())
    }

    pub fn stabilizer(&self, name: &str) -> Option<&StabilizerSpec> {
        self.stabilizers.iter().find(|s| s.name == name)
    }

    /// Change the flip qubit of the named stabilizer.
    pub fn set_flip(&mut self, name: &str, flip_qubit: usize) -> Result<()> {
        let s = self
            .stabilizers
            .iter_mut()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Domain(format!("unknown stabilizer {name}")))?;
        *s = StabilizerSpec::new(&s.name.clone(), s.string.clone(), flip_qubit, s.energy_coefficient)?;
        Ok(())
    }

    /// Reorder the pump schedule by stabilizer names.
    pub fn set_schedule(&mut self, names: &[String]) -> Result<()> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            out.push(
                self.stabilizer(n)
                    .cloned()
                    .ok_or_else(|| Error::Domain(format!("unknown stabilizer {n}")))?,
            );
        }
        self.stabilizers = out;
        Ok(())
    }

    pub fn ground_space_dimension(&self) -> usize {
        let strings: Vec<PauliString> = self.stabilizers.iter().map(|s| s.string.clone()).collect();
        1usize << (self.num_system_qubits - gf2_rank(&strings))
    }

    /// tr(Π ρ) with Π = ∏ ½(1 + A_i).
    pub fn ground_space_weight(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(rho.expectation_operator(&self.ground_projector())?.re)
    }

    pub fn ground_projector(&self) -> Operator {
        let d = 1usize << self.num_system_qubits;
        let mut p = Operator::identity(d, d);
        for s in &self.stabilizers {
            p = (Operator::identity(d, d) + s.string.to_matrix()) * C64::new(0.5, 0.0) * p;
        }
        p
    }

    /// H = −Σ E_i A_i.
    pub fn hamiltonian_terms(&self) -> Result<Vec<HamiltonianTerm>> {
        self.stabilizers
            .iter()
            .map(|s| HamiltonianTerm::new(-s.energy_coefficient, s.string.clone()))
            .collect()
    }

    /// Master equation with one pump term of rate γ per stabilizer, plus the
    /// matching circuit realizations.
    pub fn pump_equation(&self, rate: f64, coherent: bool) -> Result<(MasterEquation, Realizations)> {
        let lindblad = self
            .stabilizers
            .iter()
            .map(|s| LindbladTerm::pump(&s.string, &s.flip, rate))
            .collect::<Result<Vec<_>>>()?;
        let h = if coherent { self.hamiltonian_terms()? } else { Vec::new() };
        let eq = MasterEquation::new(h, lindblad)?;
        let mut r = Realizations::new();
        for (i, s) in self.stabilizers.iter().enumerate() {
            r.register(&eq, i, PumpRealization { stabilizer: s.string.clone(), flip_qubit: s.flip_qubit })?;
        }
        Ok((eq, r))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Rank over GF(2) of the binary symplectic vectors of `strings`.
pub fn gf2_rank(strings: &[PauliString]) -> usize {
    let mut rows: Vec<Vec<bool>> = strings
        .iter()
        .map(|s| {
            let mut v = Vec::with_capacity(2 * s.num_qubits());
            for p in s.factors() {
                v.push(matches!(p, Pauli::X | Pauli::Y));
            }
            for p in s.factors() {
                v.push(matches!(p, Pauli::Z | Pauli::Y));
            }
            v
        })
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let src = rows[rank].clone();
                for (a, b) in rows[r].iter_mut().zip(src) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn string_on(n: usize, qubits: &[usize], p: Pauli) -> PauliString {
    PauliString::uniform(n, qubits, p).expect("qubits in range")
}

/// Two-plaquette toric code on seven edge qubits.
pub fn toric_two_plaquette() -> CodeModel {
    let n = 7;
    let x = |name: &str, q: &[usize], flip: usize| {
        StabilizerSpec::new(name, string_on(n, q, Pauli::X), flip, 1.0).expect("geometry table")
    };
    let z = |name: &str, q: &[usize], flip: usize| {
        StabilizerSpec::new(name, string_on(n, q, Pauli::Z), flip, 1.0).expect("geometry table")
    };
    let model = CodeModel {
        name: "toric-two-plaquette".into(),
        num_system_qubits: n,
        stabilizers: vec![
            x("X_TL", &[0, 1], 1),
            x("X_TR", &[4, 5], 4),
            x("X_TM", &[0, 3, 4], 3),
            x("X_BL", &[1, 2], 2),
            x("X_BM", &[2, 3, 6], 6),
            x("X_BR", &[5, 6], 5),
            z("Z_L", &[0, 1, 2, 3], 3),
            z("Z_R", &[3, 4, 5, 6], 5),
        ],
        logical_x: None,
        logical_z: None,
    };
    debug_assert!(model.validate().is_ok());
    model
}

/// Seven-qubit color code with three plaquettes.
pub fn color_code_seven() -> CodeModel {
    let n = 7;
    let plaquettes: [(&str, [usize; 4], usize); 3] =
        [("1", [0, 1, 2, 3], 0), ("2", [1, 2, 4, 5], 4), ("3", [2, 3, 5, 6], 6)];
    let mut stabilizers = Vec::new();
    for (p, kind) in [(Pauli::X, "A"), (Pauli::Z, "B")] {
        for (label, q, corner) in &plaquettes {
            stabilizers.push(
                StabilizerSpec::new(&format!("{kind}{label}"), string_on(n, q, p), *corner, 1.0)
                    .expect("geometry table"),
            );
        }
    }
    let all: Vec<usize> = (0..n).collect();
    CodeModel {
        name: "color-code-7".into(),
        num_system_qubits: n,
        stabilizers,
        logical_x: Some(string_on(n, &all, Pauli::X)),
        logical_z: Some(string_on(n, &all, Pauli::Z)),
    }
}

/// Expectations of every stabilizer, in model order.
pub fn syndrome<S: Expectation + ?Sized>(state: &S, model: &CodeModel) -> Result<Vec<f64>> {
    model.stabilizers.iter().map(|s| state.expectation_of(&s.string)).collect()
}

/// Names of stabilizers with negative expectation.
pub fn excitations<S: Expectation + ?Sized>(state: &S, model: &CodeModel) -> Result<Vec<String>> {
    Ok(syndrome(state, model)?
        .into_iter()
        .zip(&model.stabilizers)
        .filter(|(v, _)| *v < 0.0)
        .map(|(_, s)| s.name.clone())
        .collect())
}

/// Stabilizer expectations after each pump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingTrace {
    pub labels: Vec<String>,
    /// Row 0 is the initial state; row k follows the k-th pump.
    pub rows: Vec<Vec<f64>>,
}

/// Pump every stabilizer in schedule order, `sweeps` times.
pub fn cool_to_ground(
    model: &CodeModel,
    rho0: &DensityMatrix,
    theta: f64,
    sweeps: usize,
) -> Result<(DensityMatrix, CoolingTrace)> {
    if sweeps == 0 {
        return Err(Error::Domain("sweeps must be at least 1".into()));
    }
    let mut rho = rho0.clone();
    let mut rows = vec![syndrome(&rho, model)?];
    for _ in 0..sweeps {
        for s in &model.stabilizers {
            rho = s.pump(&rho, theta)?;
            rows.push(syndrome(&rho, model)?);
        }
    }
    let labels = model.stabilizers.iter().map(|s| s.name.clone()).collect();
    Ok((rho, CoolingTrace { labels, rows }))
}

/// Cool |0…0⟩ into the code space. The pumps flip σz or σx on single
/// qubits, and the σx flips only act on the −1 eigenspace of Z-type
/// stabilizers that |0…0⟩ never populates, so Ẑ stays +1.
pub fn logical_prepare_zero(model: &CodeModel, theta: f64) -> Result<DensityMatrix> {
    if model.logical_z.is_none() {
        return Err(Error::Domain(format!("{} has no logical operators", model.name)));
    }
    let mut rho = DensityMatrix::zero(model.num_system_qubits)?;
    for _ in 0..10_000 {
        if model.ground_space_weight(&rho)? > 1.0 - 1e-12 {
            return Ok(rho);
        }
        for s in &model.stabilizers {
            rho = s.pump(&rho, theta)?;
        }
    }
    Err(Error::Domain(format!("cooling with theta {theta} did not converge")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalGate {
    X,
    Z,
    /// Hadamard on every qubit.
    H,
    /// Phase gate diag(1, i) on every qubit.
    K,
}

impl LogicalGate {
    pub fn single_qubit(self) -> Mat2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hr = C64::new(h, 0.0);
        match self {
            LogicalGate::X => [[ZERO, ONE], [ONE, ZERO]],
            LogicalGate::Z => [[ONE, ZERO], [ZERO, -ONE]],
            LogicalGate::H => [[hr, hr], [hr, -hr]],
            LogicalGate::K => [[ONE, ZERO], [ZERO, C64::new(0.0, 1.0)]],
        }
    }

    pub fn operator(self, num_qubits: usize) -> Result<Operator> {
        let mut reg = OperatorRegister::identity(num_qubits)?;
        for q in 0..num_qubits {
            reg.apply_1q(q, &self.single_qubit());
        }
        Ok(reg.into_operator())
    }
}

/// Apply the transversal gate to every system qubit. Returns whether the
/// input was in the code space (all stabilizers +1 within 1e-10); the gate
/// is applied either way.
pub fn logical_gate<S>(model: &CodeModel, state: &mut S, which: LogicalGate) -> Result<bool>
where
    S: Register + Expectation,
{
    if state.num_qubits() != model.num_system_qubits {
        return Err(Error::QubitMismatch { expected: model.num_system_qubits, found: state.num_qubits() });
    }
    let in_code = syndrome(state, model)?.iter().all(|v| (v - 1.0).abs() < 1e-10);
    let m = which.single_qubit();
    for q in 0..model.num_system_qubits {
        state.apply_1q(q, &m);
    }
    Ok(in_code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_tables_are_consistent() {
        for m in [toric_two_plaquette(), color_code_seven()] {
            m.validate().unwrap();
        }
        assert_eq!(toric_two_plaquette().ground_space_dimension(), 1);
        assert_eq!(color_code_seven().ground_space_dimension(), 2);
    }

    #[test]
    fn rank_of_dependent_set() {
        let s: Vec<PauliString> = ["+XXI", "+IXX", "+XIX"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(gf2_rank(&s), 2);
    }
}
