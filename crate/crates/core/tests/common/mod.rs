//! Reference constructions used only by tests. None of these call into the
//! gate kernels of the library.
#![allow(dead_code)]

use ionsim::linalg::{Operator, C64};
use ionsim::{DensityMatrix, PauliString, StateVector};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn eye(d: usize) -> Operator {
    Operator::identity(d, d)
}

/// exp(M) by scaling and squaring of a Taylor series.
pub fn expm(m: &Operator) -> Operator {
    let norm: f64 = m.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    let s = (norm.log2().ceil() as i32 + 1).max(0) as u32;
    let scaled = m * c(1.0 / 2f64.powi(s as i32), 0.0);
    let d = m.nrows();
    let mut term = eye(d);
    let mut sum = eye(d);
    for k in 1..30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// exp(iφP) = cos φ + i sin φ P for P² = 1.
pub fn pauli_exp(phi: f64, p: &Operator) -> Operator {
    eye(p.nrows()) * c(phi.cos(), 0.0) + p * c(0.0, phi.sin())
}

pub fn pauli(s: &str) -> Operator {
    s.parse::<PauliString>().unwrap().to_matrix()
}

pub fn sx() -> Operator {
    Operator::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}
pub fn sy() -> Operator {
    Operator::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}
pub fn sz() -> Operator {
    Operator::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `op` on qubit `q` of an `n`-qubit register (qubit 0 least significant).
pub fn on(op: &Operator, q: usize, n: usize) -> Operator {
    let mut out = Operator::from_element(1, 1, c(1.0, 0.0));
    for k in (0..n).rev() {
        out = if k == q { out.kronecker(op) } else { out.kronecker(&eye(2)) };
    }
    out
}

pub fn ket_proj(v: [C64; 2]) -> Operator {
    let k = DVector::from_column_slice(&v);
    &k * k.adjoint()
}

pub fn y_plus() -> [C64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(h, 0.0), c(0.0, h)]
}
pub fn y_minus() -> [C64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(h, 0.0), c(0.0, -h)]
}

/// Controlled-gate rows written as projector sums on (0, i).
pub fn correcting_oracle(row: usize, theta: f64, i: usize, n: usize) -> Operator {
    let d = 1 << n;
    let zero = [c(1., 0.), c(0., 0.)];
    let one = [c(0., 0.), c(1., 0.)];
    let ey = |s: f64| pauli_exp(s * theta, &sy());
    let ez = pauli_exp(-theta, &sz());
    let (inert, active, w) = match row {
        1 => (y_minus(), y_plus(), ez),
        2 => (one, zero, ey(-1.0)),
        3 => (y_plus(), y_minus(), ez),
        4 => (zero, one, ey(1.0)),
        _ => panic!("row"),
    };
    let _ = d;
    on(&ket_proj(inert), 0, n) + on(&ket_proj(active), 0, n) * on(&w, i, n)
}

/// |tr(U†V)|/d.
pub fn overlap(u: &Operator, v: &Operator) -> f64 {
    let tr: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    tr.norm() / u.nrows() as f64
}

/// max |V − e^{iα}U| with the phase fixed from the trace.
pub fn aligned_diff(u: &Operator, v: &Operator) -> f64 {
    let tr: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    let ph = tr / tr.norm();
    u.iter().zip(v.iter()).map(|(a, b)| (b - a * ph).norm()).fold(0.0, f64::max)
}

pub fn assert_same_up_to_phase(u: &Operator, v: &Operator, tol: f64, what: &str) {
    let dev = 1.0 - overlap(u, v);
    let ad = aligned_diff(u, v);
    assert!(dev < tol && ad < tol.sqrt().max(1e-9), "{what}: 1-overlap {dev:e}, aligned diff {ad:e}");
}

pub fn ms_oracle(theta: f64, phi: f64, targets: &[usize], n: usize) -> Operator {
    let d = 1 << n;
    let mut s = Operator::zeros(d, d);
    for &q in targets {
        s += on(&(sx() * c(phi.cos(), 0.0) + sy() * c(phi.sin(), 0.0)), q, n);
    }
    expm(&(&s * &s * c(0.0, -theta / 4.0)))
}

pub fn rot_oracle(axis: char, angle: f64, q: usize, n: usize) -> Operator {
    let p = match axis {
        'x' => sx(),
        'y' => sy(),
        _ => sz(),
    };
    on(&pauli_exp(-angle / 2.0, &p), q, n)
}

pub fn dm(psi: &StateVector) -> DensityMatrix {
    DensityMatrix::from_pure(psi).unwrap()
}

pub fn ghz4() -> StateVector {
    let mut a = vec![c(0., 0.); 16];
    a[0] = c(1., 0.);
    a[15] = c(1., 0.);
    StateVector::from_amplitudes(a).unwrap()
}

/// Pump channel elements from the projector formulas.
pub fn pump_oracle(a: &Operator, f: &Operator, theta: f64) -> Vec<Operator> {
    let d = a.nrows();
    let pp = (eye(d) + a) * c(0.5, 0.0);
    let pm = (eye(d) - a) * c(0.5, 0.0);
    vec![&pp + &pm * c(theta.cos(), 0.0), f * &pm * c(theta.sin(), 0.0)]
}

pub fn choi_of(elements: &[Operator]) -> Operator {
    let d = elements[0].nrows();
    let mut j = Operator::zeros(d * d, d * d);
    for e in elements {
        let v = DVector::from_column_slice(e.as_slice());
        j += &v * v.adjoint();
    }
    j
}

pub fn max_diff(a: &Operator, b: &Operator) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Pauli-string matrix from single-qubit factors, qubit 0 first, with an
/// optional leading `-`.
pub fn pauli_ref(s: &str) -> Operator {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.trim_start_matches('+')),
    };
    let n = body.len();
    let mut out = eye(1 << n) * c(sign, 0.0);
    for (q, ch) in body.chars().enumerate() {
        let f = match ch {
            'X' => sx(),
            'Y' => sy(),
            'Z' => sz(),
            _ => continue,
        };
        out = on(&f, q, n) * out;
    }
    out
}

pub fn ket(psi: &StateVector) -> DVector<C64> {
    DVector::from_column_slice(psi.amplitudes())
}

pub fn state_of(v: &DVector<C64>) -> StateVector {
    StateVector::from_amplitudes(v.iter().copied().collect()).unwrap()
}

/// ⟨ψ|M|ψ⟩ from the amplitude vector.
pub fn expect(psi: &StateVector, m: &Operator) -> C64 {
    let v = ket(psi);
    (v.adjoint() * m * &v)[(0, 0)]
}

/// Random mixed state as a convex mix of random pure states.
pub fn random_mixed(n: usize, k: usize, r: &mut ChaCha8Rng) -> DensityMatrix {
    use rand::Rng;
    let d = 1 << n;
    let mut m = Operator::zeros(d, d);
    let mut total = 0.0;
    for _ in 0..k {
        let w: f64 = r.random_range(0.05..1.0);
        let v = ket(&StateVector::random(n, r).unwrap());
        m += (&v * v.adjoint()) * c(w, 0.0);
        total += w;
    }
    DensityMatrix::from_matrix(m * c(1.0 / total, 0.0)).unwrap()
}

/// Exact ensemble average of the noisy GHZ pump: a Gaussian kick of width
/// σ on R(z, ±π) averages to dephasing of that qubit with coherence factor
/// exp(−σ²/2). Returns ⟨obs⟩ for steps 0..=steps from |0⟩|1111⟩.
pub fn averaged_pump_expectations(
    circuit: &ionsim::circuits::Circuit,
    sigma: f64,
    observables: &[PauliString],
    steps: usize,
) -> Vec<Vec<f64>> {
    use ionsim::gates::{Axis, GateOp};
    let keep = (1.0 + (-sigma * sigma / 2.0).exp()) / 2.0;
    let n = circuit.num_qubits();
    let mut rho = DensityMatrix::new_basis_state(n, "01111").unwrap();
    let record = |rho: &DensityMatrix| observables.iter().map(|p| rho.expectation(p).unwrap()).collect::<Vec<_>>();
    let mut out = vec![record(&rho)];
    for _ in 0..steps {
        for op in circuit.ops() {
            match op {
                GateOp::Reset { qubit } => rho.reset_qubit(*qubit).unwrap(),
                GateOp::Rot { axis: Axis::Z, angle, qubit } if (angle.abs() - std::f64::consts::PI).abs() < 1e-12 => {
                    op.apply(&mut rho).unwrap();
                    let z = on(&sz(), *qubit, n);
                    let m = rho.matrix() * c(keep, 0.0) + &z * rho.matrix() * &z * c(1.0 - keep, 0.0);
                    rho = DensityMatrix::from_matrix(m).unwrap();
                }
                _ => op.apply(&mut rho).unwrap(),
            }
        }
        out.push(record(&rho));
    }
    out
}
