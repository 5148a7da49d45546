//! Gate sequences, their text form, and equivalence checking.

mod blocks;
mod readout;
mod refocus;

pub use blocks::{
    ancilla_rotation, coherent_block, coherent_block_ancilla_free, dissipative_block, realized_flip,
    BlockKind,
};
pub use readout::{measure_ancilla_y, qnd_readout, read_stabilizer};
pub use refocus::{
    decompose_correcting_gate, forward_only, refocus_subset_gates, refocused_ms_excluding, star_ms,
    two_ion_ms_via_refocus,
};

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::{Axis, CorrectionRow, GateOp, OperatorRegister};
use crate::linalg::{self, Operator, C64};
use crate::qstate::{DensityMatrix, Register, StateVector};

/// Ordered gate sequence on a fixed register. Ops run in list order.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
    target: String,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, ops: Vec::new(), target: String::new() }
    }

    pub fn with_target(mut self, target: impl Into<String>) -> Self {
        self.target = target.into();
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    pub fn is_unitary(&self) -> bool {
        self.ops.iter().all(GateOp::is_unitary)
    }

    pub fn ms_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, GateOp::Ms { .. })).count()
    }

    /// Apply a reset-free circuit to any register.
    pub fn apply_unitary<R: Register + ?Sized>(&self, reg: &mut R) -> Result<()> {
        self.check_register(reg.num_qubits())?;
        for op in &self.ops {
            op.apply(reg)?;
        }
        Ok(())
    }

    /// Dense unitary; fails if the circuit contains a reset.
    pub fn unitary(&self) -> Result<Operator> {
        if !self.is_unitary() {
            return Err(Error::InvalidCircuit("circuit contains a reset".into()));
        }
        let mut reg = OperatorRegister::identity(self.num_qubits)?;
        self.apply_unitary(&mut reg)?;
        Ok(reg.into_operator())
    }

    /// Exact evolution; resets act as the optical-pumping channel.
    pub fn apply_to_density(&self, rho: &mut DensityMatrix) -> Result<()> {
        self.check_register(rho.num_qubits())?;
        for op in &self.ops {
            match op {
                GateOp::Reset { qubit } => rho.reset_qubit(*qubit)?,
                _ => op.apply(rho)?,
            }
        }
        Ok(())
    }

    /// One sampled trajectory; resets measure and flip back to |0⟩.
    pub fn apply_to_state<R: Rng + ?Sized>(&self, psi: &mut StateVector, rng: &mut R) -> Result<()> {
        self.check_register(psi.num_qubits())?;
        for op in &self.ops {
            match op {
                GateOp::Reset { qubit } => psi.reset_qubit(*qubit, rng),
                _ => op.apply(psi)?,
            }
        }
        Ok(())
    }

    /// Kraus elements induced on qubits `1..n` by a circuit of the form
    /// "unitary part, then RESET(0)", with the ancilla starting in |0⟩:
    /// E_k = ⟨k|₀ U |0⟩₀.
    pub fn system_kraus(&self) -> Result<Vec<Operator>> {
        let (last, body) = self
            .ops
            .split_last()
            .ok_or_else(|| Error::InvalidCircuit("empty circuit".into()))?;
        if *last != (GateOp::Reset { qubit: 0 }) || body.iter().any(|op| !op.is_unitary()) {
            return Err(Error::InvalidCircuit(
                "expected a unitary body followed by a single RESET(0)".into(),
            ));
        }
        let mut unitary_part = Circuit::new(self.num_qubits);
        unitary_part.ops = body.to_vec();
        let u = unitary_part.unitary()?;
        let ds = 1usize << (self.num_qubits - 1);
        Ok((0..2)
            .map(|k| Operator::from_fn(ds, ds, |r, c| u[((r << 1) | k, c << 1)]))
            .collect())
    }

    fn check_register(&self, n: usize) -> Result<()> {
        if n != self.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, found: n });
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# qubits: {}", self.num_qubits)?;
        if !self.target.is_empty() {
            writeln!(f, "# target: {}", self.target)?;
        }
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut num_qubits = None;
        let mut target = String::new();
        let mut ops = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(n) = comment.strip_prefix("qubits:") {
                    num_qubits = Some(n.trim().parse::<usize>().map_err(|e| Error::Parse {
                        line: lineno,
                        message: format!("bad qubit count: {e}"),
                    })?);
                } else if let Some(t) = comment.strip_prefix("target:") {
                    target = t.trim().to_string();
                }
                continue;
            }
            ops.push((lineno, parse_op(line).map_err(|message| Error::Parse { line: lineno, message })?));
        }
        let num_qubits = num_qubits.ok_or(Error::Parse {
            line: 0,
            message: "missing '# qubits: N' header".into(),
        })?;
        let mut c = Circuit::new(num_qubits).with_target(target);
        for (lineno, op) in ops {
            c.push(op).map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
        }
        Ok(c)
    }
}

fn parse_op(line: &str) -> std::result::Result<GateOp, String> {
    let open = line.find('(').ok_or("missing '('")?;
    let body = line[open + 1..].strip_suffix(')').ok_or("missing ')'")?;
    let head = &line[..open];
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"));
    let idx = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("bad index {s:?}: {e}"));
    match head {
        "MS" => {
            let (t, rest) = body.split_once(';').ok_or("MS needs 'targets; theta, phi'")?;
            let targets = t.split(',').map(idx).collect::<std::result::Result<Vec<_>, _>>()?;
            let (theta, phi) = rest.split_once(',').ok_or("MS needs theta and phi")?;
            Ok(GateOp::ms(&targets, num(theta)?, num(phi)?))
        }
        "R" => {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 3 {
                return Err("R needs 'axis, angle, qubit'".into());
            }
            let axis: Axis = parts[0].parse().map_err(|e: Error| e.to_string())?;
            Ok(GateOp::Rot { axis, angle: num(parts[1])?, qubit: idx(parts[2])? })
        }
        "RESET" => Ok(GateOp::Reset { qubit: idx(body)? }),
        h if h.starts_with("C[") && h.ends_with(']') => {
            let row = CorrectionRow::from_index(idx(&h[2..h.len() - 1])?).map_err(|e| e.to_string())?;
            let (theta, qs) = body.split_once(';').ok_or("C needs 'theta; control, target'")?;
            let (control, target) = qs.split_once(',').ok_or("C needs control and target")?;
            Ok(GateOp::Controlled { row, theta: num(theta)?, control: idx(control)?, target: idx(target)? })
        }
        other => Err(format!("unknown op {other:?}")),
    }
}

/// Outcome of comparing a candidate unitary with a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    /// |tr(U†V)| / d.
    pub overlap: f64,
    /// max |V − e^{iα} U| with α chosen from the trace.
    pub aligned_max_diff: f64,
    /// max |V − U| with no phase freedom.
    pub strict_max_diff: f64,
}

impl Equivalence {
    /// Up to global phase: 1 − overlap; strict: elementwise distance.
    pub fn deviation(&self, strict: bool) -> f64 {
        if strict {
            self.strict_max_diff
        } else {
            (1.0 - self.overlap).max(0.0)
        }
    }

    pub fn holds(&self, tol: f64, strict: bool) -> bool {
        self.deviation(strict) < tol && (strict || self.aligned_max_diff < tol.sqrt())
    }
}

pub fn compare_unitaries(candidate: &Operator, reference: &Operator) -> Result<Equivalence> {
    let overlap = linalg::trace_overlap(reference, candidate)?;
    let tr: C64 = reference.iter().zip(candidate.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { C64::new(1.0, 0.0) };
    let aligned = reference * phase;
    Ok(Equivalence {
        overlap,
        aligned_max_diff: linalg::max_abs_diff(candidate, &aligned),
        strict_max_diff: linalg::max_abs_diff(candidate, reference),
    })
}

pub fn check_circuit(circuit: &Circuit, reference: &Operator) -> Result<Equivalence> {
    compare_unitaries(&circuit.unitary()?, reference)
}
