use nalgebra::DVector;

use super::pauli::{apply_to_buffer, PauliString};
use super::{Register, StateVector};
use crate::error::{Error, Result};
use crate::kernel::{self, Mat2, Mat4};
use crate::linalg::{self, Operator, C64, ONE, ZERO};

pub const MAX_MIXED_QUBITS: usize = 8;

/// Mixed state. Stored column-major, so in the flat buffer the row index
/// occupies wires `0..n` and the column index wires `n..2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    elements: Operator,
}

impl DensityMatrix {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        let d = 1usize << num_qubits;
        let mut m = Operator::zeros(d, d);
        m[(0, 0)] = ONE;
        Ok(DensityMatrix { num_qubits, elements: m })
    }

    pub fn new_basis_state(num_qubits: usize, bits: &str) -> Result<Self> {
        check_capacity(num_qubits)?;
        Self::from_pure(&StateVector::new_basis_state(num_qubits, bits)?)
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        check_capacity(psi.num_qubits())?;
        let v = DVector::from_column_slice(psi.amplitudes());
        Ok(DensityMatrix {
            num_qubits: psi.num_qubits(),
            elements: &v * v.adjoint(),
        })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        let d = 1usize << num_qubits;
        Ok(DensityMatrix {
            num_qubits,
            elements: linalg::identity(d) * C64::new(1.0 / d as f64, 0.0),
        })
    }

    /// Wraps a matrix after checking Hermiticity, unit trace and positivity.
    pub fn from_matrix(m: Operator) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Domain("density matrix must be square".into()));
        }
        let n = linalg::num_qubits_for_dim(m.nrows())?;
        check_capacity(n)?;
        let rho = DensityMatrix { num_qubits: n, elements: m };
        rho.validate(1e-10)?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(num_qubits: usize, elements: Operator) -> Self {
        DensityMatrix { num_qubits, elements }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn matrix(&self) -> &Operator {
        &self.elements
    }

    pub fn into_matrix(self) -> Operator {
        self.elements
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.elements).re
    }

    pub fn purity(&self) -> f64 {
        linalg::trace(&(&self.elements * &self.elements)).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.elements)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity and unit trace to `tol`, and eigenvalues ≥ −`tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let h = linalg::hermiticity_deviation(&self.elements);
        if h > tol {
            return Err(Error::NotHermitian { deviation: h });
        }
        let t = (linalg::trace(&self.elements) - ONE).norm();
        if t > tol {
            return Err(Error::Domain(format!("trace deviates from 1 by {t:e}")));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(Error::Domain(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_same(p.num_qubits())?;
        let n = self.num_qubits;
        let buf = self.elements.as_mut_slice();
        apply_to_buffer(p, buf, 0, false);
        apply_to_buffer(p, buf, n, true);
        Ok(())
    }

    /// ρ ← Pρ. The result is generally not a density matrix.
    pub fn left_mul_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_same(p.num_qubits())?;
        apply_to_buffer(p, self.elements.as_mut_slice(), 0, false);
        Ok(())
    }

    /// ρ ← ρP for a Hermitian string.
    pub fn right_mul_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_same(p.num_qubits())?;
        if !p.is_hermitian() {
            return Err(Error::Domain(format!("{p} is not Hermitian")));
        }
        // Column wires carry Pᵀ, which equals conj(P) for Hermitian P.
        apply_to_buffer(p, self.elements.as_mut_slice(), self.num_qubits, true);
        Ok(())
    }

    pub(crate) fn combine(&self, terms: &[(f64, &DensityMatrix)]) -> DensityMatrix {
        let mut out = Operator::zeros(self.dim(), self.dim());
        for (w, t) in terms {
            out += t.matrix() * C64::new(*w, 0.0);
        }
        DensityMatrix::from_matrix_unchecked(self.num_qubits, out)
    }

    /// tr(Pρ) for a Hermitian string.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        self.check_same(p.num_qubits())?;
        if !p.is_hermitian() {
            return Err(Error::Domain(format!("{p} is not Hermitian")));
        }
        let (flip, sign, power) = p.masks();
        let ph = super::Phase::from_power(power).value();
        // tr(Pρ) = Σ_k ⟨k|P ρ|k⟩ = Σ_k s_k ρ[k^flip, k] with P|k^flip⟩ = s|k⟩
        let mut acc = ZERO;
        for k in 0..self.dim() {
            let src = k ^ flip;
            let s = if (src & sign).count_ones() % 2 == 1 { -ph } else { ph };
            acc += s * self.elements[(src, k)];
        }
        debug_assert!(acc.im.abs() < 1e-10, "imaginary expectation {acc}");
        Ok(acc.re)
    }

    /// tr(Oρ) for an arbitrary dense operator.
    pub fn expectation_operator(&self, o: &Operator) -> Result<C64> {
        if o.shape() != self.elements.shape() {
            return Err(Error::Domain("operator dimension mismatch".into()));
        }
        Ok(o.iter().zip(self.elements.transpose().iter()).map(|(a, b)| a * b).sum())
    }

    /// ⟨b|ρ|b⟩.
    pub fn fidelity(&self, b: &StateVector) -> Result<f64> {
        self.check_same(b.num_qubits())?;
        let v = DVector::from_column_slice(b.amplitudes());
        Ok((v.adjoint() * &self.elements * &v)[(0, 0)].re)
    }

    /// Reduced state on `keep`; the kept qubits are renumbered in ascending order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Domain("partial trace needs a nonempty keep set".into()));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &q in &keep {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
            }
        }
        let traced: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let dk = 1usize << keep.len();
        let dt = 1usize << traced.len();
        let scatter = |bits: usize, qs: &[usize]| -> usize {
            qs.iter()
                .enumerate()
                .filter(|(j, _)| bits >> j & 1 == 1)
                .map(|(_, &q)| 1usize << q)
                .sum()
        };
        let kept_idx: Vec<usize> = (0..dk).map(|b| scatter(b, &keep)).collect();
        let traced_idx: Vec<usize> = (0..dt).map(|b| scatter(b, &traced)).collect();
        let mut out = Operator::zeros(dk, dk);
        for c in 0..dk {
            for r in 0..dk {
                let mut acc = ZERO;
                for &t in &traced_idx {
                    acc += self.elements[(kept_idx[r] | t, kept_idx[c] | t)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(DensityMatrix { num_qubits: keep.len(), elements: out })
    }

    /// Optical pumping of `qubit` to |0⟩: Kraus pair {|0⟩⟨0|, |0⟩⟨1|}.
    pub fn reset_qubit(&mut self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        let m = 1usize << qubit;
        let d = self.dim();
        let mut out = Operator::zeros(d, d);
        for c in 0..d {
            if c & m != 0 {
                continue;
            }
            for r in 0..d {
                if r & m == 0 {
                    out[(r, c)] = self.elements[(r, c)] + self.elements[(r | m, c | m)];
                }
            }
        }
        self.elements = out;
        Ok(())
    }

    /// ρ ⊗ σ with `self` on the low qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.num_qubits + other.num_qubits;
        check_capacity(n)?;
        Ok(DensityMatrix {
            num_qubits: n,
            elements: other.elements.kronecker(&self.elements),
        })
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        self.check_same(other.num_qubits)?;
        Ok(linalg::trace_distance(&self.elements, &other.elements))
    }

    fn check_same(&self, n: usize) -> Result<()> {
        if n != self.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, found: n });
        }
        Ok(())
    }
}

impl Register for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_1q(&mut self, qubit: usize, m: &Mat2) {
        let n = self.num_qubits;
        let buf = self.elements.as_mut_slice();
        kernel::apply_1q(buf, qubit, m);
        kernel::apply_1q(buf, qubit + n, &kernel::conj2(m));
    }

    fn apply_2q(&mut self, a: usize, b: usize, m: &Mat4) {
        let n = self.num_qubits;
        let buf = self.elements.as_mut_slice();
        kernel::apply_2q(buf, a, b, m);
        kernel::apply_2q(buf, a + n, b + n, &kernel::conj4(m));
    }

    fn apply_diagonal(&mut self, phase: &dyn Fn(usize) -> C64) {
        let n = self.num_qubits;
        let mask = (1usize << n) - 1;
        kernel::apply_diag(self.elements.as_mut_slice(), |k| {
            phase(k & mask) * phase(k >> n).conj()
        });
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_MIXED_QUBITS {
        return Err(Error::Capacity {
            what: "density matrix",
            requested: n,
            max: MAX_MIXED_QUBITS,
        });
    }
    Ok(())
}
