//! Gate objects and their exact unitaries.
//!
//! Local rotations follow `R(axis, a) = exp(−i a σ_axis / 2)`. The MS gate is
//! `exp(−i θ/4 (cosφ Sx + sinφ Sy)²)` with `S` summed over the targeted
//! qubits, applied by rotating each target into the eigenbasis of
//! `cosφ σx + sinφ σy` and multiplying by a diagonal phase.

use std::fmt;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::kernel::{Mat2, Mat4};
use crate::linalg::{self, Operator, C64, ONE, ZERO};
use crate::qstate::{PauliString, Register};

/// Largest register for which dense unitaries are built.
pub const MAX_DENSE_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::Domain(format!("unknown axis {other:?}"))),
        }
    }
}

/// Row of the controlled-gate table, labelled by the stabilizer weight mod 4
/// (`Row4` covers n = 4, 8, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrectionRow {
    Row1,
    Row2,
    Row3,
    Row4,
}

impl CorrectionRow {
    pub const ALL: [CorrectionRow; 4] = [
        CorrectionRow::Row1,
        CorrectionRow::Row2,
        CorrectionRow::Row3,
        CorrectionRow::Row4,
    ];

    pub fn for_weight(n: usize) -> Result<Self> {
        match n % 4 {
            _ if n == 0 => Err(Error::Domain("stabilizer weight must be positive".into())),
            1 => Ok(CorrectionRow::Row1),
            2 => Ok(CorrectionRow::Row2),
            3 => Ok(CorrectionRow::Row3),
            _ => Ok(CorrectionRow::Row4),
        }
    }

    pub fn index(self) -> usize {
        match self {
            CorrectionRow::Row1 => 1,
            CorrectionRow::Row2 => 2,
            CorrectionRow::Row3 => 3,
            CorrectionRow::Row4 => 4,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(CorrectionRow::Row1),
            2 => Ok(CorrectionRow::Row2),
            3 => Ok(CorrectionRow::Row3),
            4 => Ok(CorrectionRow::Row4),
            _ => Err(Error::Domain(format!("unknown correction row {i}"))),
        }
    }

    /// (inert control state, active control state, active target operator).
    fn parts(self, theta: f64) -> ([C64; 2], [C64; 2], Mat2) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let zero = [ONE, ZERO];
        let one = [ZERO, ONE];
        let y_plus = [C64::new(h, 0.0), C64::new(0.0, h)];
        let y_minus = [C64::new(h, 0.0), C64::new(0.0, -h)];
        let (c, s) = (theta.cos(), theta.sin());
        // exp(±iθσy) = cosθ ± i sinθ σy
        let exp_y = |sign: f64| -> Mat2 {
            [
                [C64::new(c, 0.0), C64::new(sign * s, 0.0)],
                [C64::new(-sign * s, 0.0), C64::new(c, 0.0)],
            ]
        };
        let exp_minus_z: Mat2 = [
            [C64::new(c, -s), ZERO],
            [ZERO, C64::new(c, s)],
        ];
        match self {
            CorrectionRow::Row1 => (y_minus, y_plus, exp_minus_z),
            CorrectionRow::Row2 => (one, zero, exp_y(-1.0)),
            CorrectionRow::Row3 => (y_plus, y_minus, exp_minus_z),
            CorrectionRow::Row4 => (zero, one, exp_y(1.0)),
        }
    }

    /// 4×4 matrix in the local basis `bit(ancilla) + 2·bit(target)`.
    pub fn matrix(self, theta: f64) -> Mat4 {
        let (inert, active, w) = self.parts(theta);
        let proj = |v: [C64; 2]| -> Mat2 {
            [
                [v[0] * v[0].conj(), v[0] * v[1].conj()],
                [v[1] * v[0].conj(), v[1] * v[1].conj()],
            ]
        };
        let (pi, pa) = (proj(inert), proj(active));
        let mut m = [[ZERO; 4]; 4];
        for a in 0..2 {
            for a2 in 0..2 {
                for b in 0..2 {
                    for b2 in 0..2 {
                        let id = if b == b2 { ONE } else { ZERO };
                        m[a + 2 * b][a2 + 2 * b2] = pi[a][a2] * id + pa[a][a2] * w[b][b2];
                    }
                }
            }
        }
        m
    }
}

/// One step of a circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    Ms {
        targets: Vec<usize>,
        theta: f64,
        phi: f64,
    },
    Rot {
        axis: Axis,
        angle: f64,
        qubit: usize,
    },
    /// Controlled correcting gate with the ancilla as control.
    Controlled {
        row: CorrectionRow,
        theta: f64,
        control: usize,
        target: usize,
    },
    /// Optical pumping of one qubit back to |0⟩.
    Reset { qubit: usize },
}

impl GateOp {
    pub fn ms(targets: &[usize], theta: f64, phi: f64) -> GateOp {
        let mut t = targets.to_vec();
        t.sort_unstable();
        GateOp::Ms { targets: t, theta, phi }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateOp::Reset { .. })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Ms { targets, .. } => targets.clone(),
            GateOp::Rot { qubit, .. } | GateOp::Reset { qubit } => vec![*qubit],
            GateOp::Controlled { control, target, .. } => vec![*control, *target],
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        match self {
            GateOp::Ms { targets, theta, phi } => {
                if targets.len() < 2 {
                    return Err(Error::InvalidCircuit("MS gate needs at least 2 targets".into()));
                }
                if targets.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidCircuit("repeated MS target".into()));
                }
                finite(*theta)?;
                finite(*phi)?;
            }
            GateOp::Rot { angle, .. } => finite(*angle)?,
            GateOp::Controlled { theta, control, target, .. } => {
                finite(*theta)?;
                if control == target {
                    return Err(Error::InvalidCircuit("control equals target".into()));
                }
            }
            GateOp::Reset { .. } => {}
        }
        Ok(())
    }

    /// Apply a unitary op. Reset is rejected here; circuits handle it per
    /// state type.
    pub fn apply<R: Register + ?Sized>(&self, reg: &mut R) -> Result<()> {
        self.validate(reg.num_qubits())?;
        match self {
            GateOp::Ms { targets, theta, phi } => apply_ms(reg, targets, *theta, *phi),
            GateOp::Rot { axis, angle, qubit } => reg.apply_1q(*qubit, &rotation_matrix(*axis, *angle)),
            GateOp::Controlled { row, theta, control, target } => {
                reg.apply_2q(*control, *target, &row.matrix(*theta))
            }
            GateOp::Reset { .. } => {
                return Err(Error::InvalidCircuit("reset is not unitary".into()));
            }
        }
        Ok(())
    }

    /// Dense unitary of this op on an `num_qubits` register.
    pub fn unitary(&self, num_qubits: usize) -> Result<Operator> {
        let mut reg = OperatorRegister::identity(num_qubits)?;
        self.apply(&mut reg)?;
        Ok(reg.into_operator())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Ms { targets, theta, phi } => {
                let t: Vec<String> = targets.iter().map(|q| q.to_string()).collect();
                write!(f, "MS({}; {theta}, {phi})", t.join(","))
            }
            GateOp::Rot { axis, angle, qubit } => write!(f, "R({}, {angle}, {qubit})", axis.symbol()),
            GateOp::Controlled { row, theta, control, target } => {
                write!(f, "C[{}]({theta}; {control}, {target})", row.index())
            }
            GateOp::Reset { qubit } => write!(f, "RESET({qubit})"),
        }
    }
}

fn finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidCircuit(format!("non-finite angle {x}")))
    }
}

/// A term `coefficient · string` of a Hamiltonian (ħ = 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl HamiltonianTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::Domain("Hamiltonian coefficient must be finite".into()));
        }
        if !string.is_hermitian() {
            return Err(Error::Domain(format!("{string} is not Hermitian")));
        }
        Ok(HamiltonianTerm { coefficient, string })
    }

    pub fn to_matrix(&self) -> Operator {
        self.string.to_matrix() * C64::new(self.coefficient, 0.0)
    }
}

pub fn rotation_matrix(axis: Axis, angle: f64) -> Mat2 {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    match axis {
        Axis::X => [
            [C64::new(c, 0.0), C64::new(0.0, -s)],
            [C64::new(0.0, -s), C64::new(c, 0.0)],
        ],
        Axis::Y => [
            [C64::new(c, 0.0), C64::new(-s, 0.0)],
            [C64::new(s, 0.0), C64::new(c, 0.0)],
        ],
        Axis::Z => [
            [C64::new(c, -s), ZERO],
            [ZERO, C64::new(c, s)],
        ],
    }
}

fn apply_ms<R: Register + ?Sized>(reg: &mut R, targets: &[usize], theta: f64, phi: f64) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = C64::from_polar(1.0, phi);
    // columns are the ±1 eigenvectors of cosφ σx + sinφ σy
    let v: Mat2 = [[C64::new(h, 0.0), C64::new(h, 0.0)], [e * h, -e * h]];
    let vd = crate::kernel::adjoint2(&v);
    for &q in targets {
        reg.apply_1q(q, &vd);
    }
    let mask: usize = targets.iter().map(|&q| 1usize << q).sum();
    let m = targets.len() as f64;
    reg.apply_diagonal(&|k| {
        let s = m - 2.0 * (k & mask).count_ones() as f64;
        C64::from_polar(1.0, -theta / 4.0 * s * s)
    });
    for &q in targets {
        reg.apply_1q(q, &v);
    }
}

/// Dense MS unitary on `targets`, identity elsewhere.
pub fn ms_unitary(theta: f64, phi: f64, targets: &[usize], num_qubits: usize) -> Result<Operator> {
    GateOp::ms(targets, theta, phi).unitary(num_qubits)
}

/// exp(−iH) by Hermitian eigendecomposition. Shares no code with the gate
/// kernels, so it serves as an independent reference.
pub fn matrix_exp_oracle(h: &Operator) -> Result<Operator> {
    if h.nrows() != h.ncols() || h.nrows() > 1024 {
        return Err(Error::Domain(format!("oracle needs a square matrix of dimension <= 1024, got {:?}", h.shape())));
    }
    let dev = linalg::hermiticity_deviation(h);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let phases = Operator::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l)));
    Ok(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
}

pub fn local_rotation(axis: Axis, angle: f64, qubit: usize) -> GateOp {
    GateOp::Rot { axis, angle, qubit }
}

/// The controlled correcting gate between the ancilla (qubit 0) and `flip_qubit`.
pub fn correcting_gate(row: CorrectionRow, theta: f64, flip_qubit: usize) -> Result<GateOp> {
    if flip_qubit == 0 {
        return Err(Error::Domain("flip qubit must not be the ancilla".into()));
    }
    Ok(GateOp::Controlled { row, theta, control: 0, target: flip_qubit })
}

/// Rewrite U_MS(−θ, φ) on `targets` with forward gates only:
/// U_MS(π−θ, φ) alone when the ion count is odd, followed by
/// ∏ (cosφ σx + sinφ σy) on every ion when it is even.
pub fn backward_ms_as_forward(theta: f64, phi: f64, targets: &[usize], num_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(num_qubits).with_target(format!("MS(-{theta}, {phi}) via forward gates"));
    c.push(GateOp::ms(targets, std::f64::consts::PI - theta, phi))?;
    if targets.len() % 2 == 0 {
        for &q in targets {
            // Rz(φ) Rx(π) Rz(−φ) = −i (cosφ σx + sinφ σy)
            c.push(local_rotation(Axis::Z, -phi, q))?;
            c.push(local_rotation(Axis::X, std::f64::consts::PI, q))?;
            c.push(local_rotation(Axis::Z, phi, q))?;
        }
    }
    Ok(c)
}

/// A dense operator that gates act on from the left; used to build unitaries
/// by pushing ops through the same kernels that act on states.
#[derive(Debug, Clone)]
pub struct OperatorRegister {
    num_qubits: usize,
    m: Operator,
}

impl OperatorRegister {
    pub fn identity(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_DENSE_QUBITS {
            return Err(Error::Capacity {
                what: "dense unitary",
                requested: num_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        Ok(OperatorRegister { num_qubits, m: linalg::identity(1 << num_qubits) })
    }

    pub fn into_operator(self) -> Operator {
        self.m
    }
}

impl Register for OperatorRegister {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_1q(&mut self, qubit: usize, m: &Mat2) {
        // columns are contiguous: wires 0..n index the row
        crate::kernel::apply_1q(self.m.as_mut_slice(), qubit, m);
    }

    fn apply_2q(&mut self, a: usize, b: usize, m: &Mat4) {
        crate::kernel::apply_2q(self.m.as_mut_slice(), a, b, m);
    }

    fn apply_diagonal(&mut self, phase: &dyn Fn(usize) -> C64) {
        let mask = (1usize << self.num_qubits) - 1;
        crate::kernel::apply_diag(self.m.as_mut_slice(), |k| phase(k & mask));
    }
}

/// Sum of σ_axis over `qubits`, as a dense matrix built from Pauli strings.
pub fn collective_spin(num_qubits: usize, qubits: &[usize], phi: f64) -> Result<Operator> {
    let d = 1usize << num_qubits;
    let mut s = Operator::zeros(d, d);
    for &q in qubits {
        let x = PauliString::single(num_qubits, q, crate::qstate::Pauli::X)?.to_matrix();
        let y = PauliString::single(num_qubits, q, crate::qstate::Pauli::Y)?.to_matrix();
        s += x * C64::new(phi.cos(), 0.0) + y * C64::new(phi.sin(), 0.0);
    }
    Ok(s)
}

/// The MS Hamiltonian (θ/4)(cosφ Sx + sinφ Sy)², so that U_MS = exp(−iH).
pub fn ms_hamiltonian(theta: f64, phi: f64, targets: &[usize], num_qubits: usize) -> Result<Operator> {
    let s = collective_spin(num_qubits, targets, phi)?;
    Ok(&s * &s * C64::new(theta / 4.0, 0.0))
}
