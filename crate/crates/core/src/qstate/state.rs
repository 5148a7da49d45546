use rand::Rng;

use super::pauli::{apply_to_buffer, PauliString};
use super::Register;
use crate::error::{Error, Result};
use crate::kernel::{self, Mat2, Mat4};
use crate::linalg::{C64, ONE, ZERO};

pub const MAX_PURE_QUBITS: usize = 20;

/// Pure state of an n-qubit register. Bit `q` of the basis index is qubit `q`;
/// qubit 0 is the ancilla wherever one is used.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Domain(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// `bits[q]` is the value of qubit `q`, so `"0111"` sets qubits 1, 2, 3.
    pub fn new_basis_state(num_qubits: usize, bits: &str) -> Result<Self> {
        check_capacity(num_qubits)?;
        if bits.chars().count() != num_qubits {
            return Err(Error::Domain(format!(
                "bitstring {bits:?} has length {} but register has {num_qubits} qubits",
                bits.chars().count()
            )));
        }
        let mut index = 0usize;
        for (q, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => index |= 1 << q,
                other => return Err(Error::Domain(format!("bad bit {other:?}"))),
            }
        }
        Self::basis(num_qubits, index)
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = crate::linalg::num_qubits_for_dim(amplitudes.len())?;
        check_capacity(num_qubits)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("state has zero or non-finite norm".into()));
        }
        Ok(StateVector {
            num_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Tensor product of single-qubit states; `qubits[q]` is the state of qubit `q`.
    pub fn product(qubits: &[[C64; 2]]) -> Result<Self> {
        check_capacity(qubits.len())?;
        let dim = 1usize << qubits.len();
        let amps = (0..dim)
            .map(|k| {
                qubits
                    .iter()
                    .enumerate()
                    .map(|(q, s)| s[(k >> q) & 1])
                    .product()
            })
            .collect();
        Self::from_amplitudes(amps)
    }

    /// Haar-random pure state.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amps = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(rand_distr::StandardNormal);
                let im: f64 = rng.sample(rand_distr::StandardNormal);
                C64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(amps)
    }

    /// Product of Haar-random single-qubit states.
    pub fn random_product<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        let qubits: Vec<[C64; 2]> = (0..num_qubits)
            .map(|_| {
                let v = StateVector::random(1, rng).expect("single qubit");
                [v.amplitudes[0], v.amplitudes[1]]
            })
            .collect();
        Self::product(&qubits)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amplitudes {
            *a /= n;
        }
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same(other.num_qubits)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨a|b⟩|, insensitive to global phase.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_capacity(n)?;
        // self occupies the low qubits
        let mut amps = Vec::with_capacity(1 << n);
        for b in &other.amplitudes {
            for a in &self.amplitudes {
                amps.push(a * b);
            }
        }
        Ok(StateVector { num_qubits: n, amplitudes: amps })
    }

    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_same(p.num_qubits())?;
        apply_to_buffer(p, &mut self.amplitudes, 0, false);
        Ok(())
    }

    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        self.check_same(p.num_qubits())?;
        if !p.is_hermitian() {
            return Err(Error::Domain(format!("{p} is not Hermitian")));
        }
        let (flip, sign, power) = p.masks();
        let ph = super::pauli::Phase::from_power(power).value();
        let mut acc = ZERO;
        for (k, a) in self.amplitudes.iter().enumerate() {
            let s = if (k & sign).count_ones() % 2 == 1 { -ph } else { ph };
            acc += self.amplitudes[k ^ flip].conj() * s * a;
        }
        debug_assert!(acc.im.abs() < 1e-10, "imaginary expectation {acc}");
        Ok(acc.re)
    }

    /// Probability that `qubit` reads 1 in the computational basis.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        let m = 1usize << qubit;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(k, _)| k & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Project `qubit` onto the given single-qubit state and renormalize.
    /// Returns the branch probability (0 leaves the state untouched).
    pub fn project_qubit(&mut self, qubit: usize, onto: [C64; 2]) -> f64 {
        let proj: Mat2 = [
            [onto[0] * onto[0].conj(), onto[0] * onto[1].conj()],
            [onto[1] * onto[0].conj(), onto[1] * onto[1].conj()],
        ];
        let mut trial = self.amplitudes.clone();
        kernel::apply_1q(&mut trial, qubit, &proj);
        let p: f64 = trial.iter().map(|a| a.norm_sqr()).sum();
        if p > 0.0 {
            let n = p.sqrt();
            self.amplitudes = trial.into_iter().map(|a| a / n).collect();
        }
        p
    }

    /// One sampled branch of the reset channel {|0⟩⟨0|, |0⟩⟨1|} on `qubit`.
    pub fn reset_qubit<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) {
        let p1 = self.prob_one(qubit);
        let m = 1usize << qubit;
        let one = rng.random::<f64>() < p1;
        let norm = if one { p1 } else { 1.0 - p1 }.sqrt();
        let mut out = vec![ZERO; self.dim()];
        for (k, a) in self.amplitudes.iter().enumerate() {
            let bit = k & m != 0;
            if bit == one {
                out[k & !m] = a / norm;
            }
        }
        self.amplitudes = out;
    }

    fn check_same(&self, n: usize) -> Result<()> {
        if n != self.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, found: n });
        }
        Ok(())
    }
}

impl Register for StateVector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_1q(&mut self, qubit: usize, m: &Mat2) {
        kernel::apply_1q(&mut self.amplitudes, qubit, m);
    }

    fn apply_2q(&mut self, a: usize, b: usize, m: &Mat4) {
        kernel::apply_2q(&mut self.amplitudes, a, b, m);
    }

    fn apply_diagonal(&mut self, phase: &dyn Fn(usize) -> C64) {
        kernel::apply_diag(&mut self.amplitudes, phase);
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PURE_QUBITS {
        return Err(Error::Capacity {
            what: "state vector",
            requested: n,
            max: MAX_PURE_QUBITS,
        });
    }
    Ok(())
}
