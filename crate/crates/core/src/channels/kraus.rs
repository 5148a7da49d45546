use crate::error::{Error, Result};
use crate::linalg::{self, Operator, C64};
use crate::qstate::{DensityMatrix, PauliString};

const COMPLETENESS_TOL: f64 = 1e-10;

/// Operation elements {E_k} of a trace-preserving map ρ ↦ Σ E_k ρ E_k†.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    num_qubits: usize,
    elements: Vec<Operator>,
}

impl KrausChannel {
    pub fn new(elements: Vec<Operator>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::Domain("channel needs at least one element".into()))?;
        let d = first.nrows();
        let num_qubits = linalg::num_qubits_for_dim(d)?;
        if elements.iter().any(|e| e.shape() != (d, d)) {
            return Err(Error::Domain("Kraus elements differ in shape".into()));
        }
        let ch = KrausChannel { num_qubits, elements };
        let dev = ch.completeness_deviation();
        if dev > COMPLETENESS_TOL {
            return Err(Error::Completeness { deviation: dev });
        }
        Ok(ch)
    }

    pub fn identity(num_qubits: usize) -> Self {
        KrausChannel { num_qubits, elements: vec![linalg::identity(1 << num_qubits)] }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    /// ‖Σ E_k†E_k − 1‖_max.
    pub fn completeness_deviation(&self) -> f64 {
        let d = 1usize << self.num_qubits;
        let mut sum = Operator::zeros(d, d);
        for e in &self.elements {
            sum += e.adjoint() * e;
        }
        linalg::max_abs_diff(&sum, &linalg::identity(d))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.num_qubits() != self.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, found: rho.num_qubits() });
        }
        let d = rho.dim();
        let mut out = Operator::zeros(d, d);
        for e in &self.elements {
            out += e * rho.matrix() * e.adjoint();
        }
        Ok(DensityMatrix::from_matrix_unchecked(self.num_qubits, out))
    }

    /// `other` after `self`.
    pub fn then(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        let elements = other
            .elements
            .iter()
            .flat_map(|b| self.elements.iter().map(move |a| b * a))
            .collect();
        Ok(KrausChannel { num_qubits: self.num_qubits, elements })
    }

    /// Choi matrix Σ_k vec(E_k) vec(E_k)† with column-stacking vec.
    pub fn choi(&self) -> Operator {
        let d = 1usize << self.num_qubits;
        let mut j = Operator::zeros(d * d, d * d);
        for e in &self.elements {
            let v = nalgebra::DVector::from_column_slice(e.as_slice());
            j += &v * v.adjoint();
        }
        j
    }
}

/// Trace distance between the normalized Choi states of two channels.
pub fn choi_distance(a: &KrausChannel, b: &KrausChannel) -> Result<f64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::QubitMismatch { expected: a.num_qubits, found: b.num_qubits });
    }
    let d = (1usize << a.num_qubits) as f64;
    let scale = C64::new(1.0 / d, 0.0);
    Ok(linalg::trace_distance(&(a.choi() * scale), &(b.choi() * scale)))
}

pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    let dev = ch.completeness_deviation();
    if dev > COMPLETENESS_TOL {
        return Err(Error::Completeness { deviation: dev });
    }
    ch.apply(rho)
}

/// E₁ = ½(1+A) + cosθ·½(1−A), E₂ = sinθ·F·½(1−A).
pub fn stabilizer_pump_channel(stabilizer: &PauliString, flip: &PauliString, theta: f64) -> Result<KrausChannel> {
    if stabilizer.num_qubits() != flip.num_qubits() {
        return Err(Error::QubitMismatch { expected: stabilizer.num_qubits(), found: flip.num_qubits() });
    }
    if !stabilizer.is_hermitian() {
        return Err(Error::Domain(format!("{stabilizer} is not Hermitian")));
    }
    if stabilizer.commutes_with(flip) {
        return Err(Error::Domain(format!("flip {flip} commutes with {stabilizer} and would not pump")));
    }
    let d = 1usize << stabilizer.num_qubits();
    let a = stabilizer.to_matrix();
    let one = linalg::identity(d);
    let half = C64::new(0.5, 0.0);
    let p_plus = (&one + &a) * half;
    let p_minus = (&one - &a) * half;
    let e1 = &p_plus + &p_minus * C64::new(theta.cos(), 0.0);
    let e2 = flip.to_matrix() * &p_minus * C64::new(theta.sin(), 0.0);
    KrausChannel::new(vec![e1, e2])
}

/// The same map as [`stabilizer_pump_channel`], evaluated with Pauli
/// actions on the row and column indices instead of dense products.
pub fn apply_stabilizer_pump(
    rho: &DensityMatrix,
    stabilizer: &PauliString,
    flip: &PauliString,
    theta: f64,
) -> Result<DensityMatrix> {
    if !stabilizer.is_hermitian() || !flip.is_hermitian() {
        return Err(Error::Domain("pump strings must be Hermitian".into()));
    }
    if stabilizer.commutes_with(flip) {
        return Err(Error::Domain(format!("flip {flip} commutes with {stabilizer} and would not pump")));
    }
    let mut left = rho.clone();
    left.left_mul_pauli(stabilizer)?;
    let mut right = rho.clone();
    right.right_mul_pauli(stabilizer)?;
    let mut both = left.clone();
    both.right_mul_pauli(stabilizer)?;
    let (c, s) = (theta.cos(), theta.sin());
    let (a, b) = ((1.0 + c) / 2.0, (1.0 - c) / 2.0);
    let kept = rho.combine(&[(a * a, rho), (a * b, &left), (a * b, &right), (b * b, &both)]);
    let q = s * s / 4.0;
    let mut moved = rho.combine(&[(q, rho), (-q, &left), (-q, &right), (q, &both)]);
    moved.apply_pauli(flip)?;
    Ok(kept.combine(&[(1.0, &kept), (1.0, &moved)]))
}

/// Reset `qubit` to |0⟩ with the Kraus pair {|0⟩⟨0|, |0⟩⟨1|}.
pub fn optical_pump_reset(rho: &DensityMatrix, qubit: usize) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.reset_qubit(qubit)?;
    Ok(out)
}
