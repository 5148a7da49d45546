//! Dense complex matrix helpers shared by every module.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Dense operator on a register of qubits, basis index little-endian.
pub type Operator = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn dagger(m: &Operator) -> Operator {
    m.adjoint()
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &Operator) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_deviation(m: &Operator) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// ‖U†U − 1‖_max.
pub fn unitarity_deviation(u: &Operator) -> f64 {
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &identity(u.nrows()))
}

/// Kronecker product `a ⊗ b` in the usual (big-endian) sense.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}

/// Eigenvalues of a Hermitian matrix (ascending is not guaranteed).
pub fn hermitian_eigenvalues(m: &Operator) -> Vec<f64> {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
}

/// Trace distance ½‖a − b‖₁ between two Hermitian matrices.
pub fn trace_distance(a: &Operator, b: &Operator) -> f64 {
    let diff = a - b;
    // symmetrize away rounding noise before the Hermitian solver
    let herm = (&diff + diff.adjoint()) * c(0.5, 0.0);
    0.5 * hermitian_eigenvalues(&herm)
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

pub fn trace(m: &Operator) -> C64 {
    m.diagonal().iter().sum()
}

/// Normalized trace overlap |tr(U†V)| / d.
pub fn trace_overlap(u: &Operator, v: &Operator) -> Result<f64> {
    if u.shape() != v.shape() {
        return Err(Error::Domain(format!(
            "shape mismatch {:?} vs {:?}",
            u.shape(),
            v.shape()
        )));
    }
    let d = u.nrows() as f64;
    let tr: C64 = u
        .iter()
        .zip(v.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(tr.norm() / d)
}

pub fn num_qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::Domain(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}
