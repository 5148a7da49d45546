//! Signed Pauli strings with exact phase tracking.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Operator, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> [[C64; 2]; 2] {
        match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Single-qubit product `self * other` as (power of i, result).
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }
}

/// Overall phase of a Pauli string, one of {+1, +i, −1, −i}, stored as a power
/// of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn value(self) -> C64 {
        match self.0 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        }
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }
}

/// Tensor product of single-qubit Paulis with a phase. Factor `q` acts on
/// qubit `q` of the register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: Phase,
    factors: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        PauliString {
            phase: Phase::PLUS,
            factors: vec![Pauli::I; num_qubits],
        }
    }

    pub fn new(phase: Phase, factors: Vec<Pauli>) -> Self {
        PauliString { phase, factors }
    }

    /// String with the given factors on the listed qubits and identity elsewhere.
    pub fn from_sparse(num_qubits: usize, terms: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(num_qubits);
        for &(q, p) in terms {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
            s.factors[q] = p;
        }
        Ok(s)
    }

    /// The same Pauli on every listed qubit.
    pub fn uniform(num_qubits: usize, qubits: &[usize], p: Pauli) -> Result<Self> {
        let terms: Vec<_> = qubits.iter().map(|&q| (q, p)).collect();
        Self::from_sparse(num_qubits, &terms)
    }

    pub fn single(num_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        Self::from_sparse(num_qubits, &[(qubit, p)])
    }

    pub fn num_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn factor(&self, q: usize) -> Pauli {
        self.factors[q]
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn negate(&self) -> Self {
        let mut s = self.clone();
        s.phase = Phase::from_power(s.phase.0 + 2);
        s
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(q, _)| q)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::QubitMismatch {
                expected: self.num_qubits(),
                found: other.num_qubits(),
            });
        }
        let mut power = self.phase.0 + other.phase.0;
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| {
                let (k, p) = a.mul(*b);
                power += k;
                p
            })
            .collect();
        Ok(PauliString {
            phase: Phase::from_power(power % 4),
            factors,
        })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .factors
            .iter()
            .zip(&other.factors)
            .filter(|(a, b)| !a.commutes_with(**b))
            .count();
        anti % 2 == 0
    }

    /// Bit masks (flip, sign) and the phase power picked up per basis state:
    /// P|k⟩ = i^power · (−1)^{popcount(k & sign)} |k ^ flip⟩.
    pub(crate) fn masks(&self) -> (usize, usize, u8) {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut power = self.phase.0;
        for (q, p) in self.factors.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    power += 1;
                }
                Pauli::Z => sign |= 1 << q,
            }
        }
        (flip, sign, power % 4)
    }

    /// Dense matrix built from Kronecker products of the factors; kept
    /// independent of the bit-mask path used for state application.
    pub fn to_matrix(&self) -> Operator {
        let mut out = Operator::from_element(1, 1, self.phase.value());
        // highest qubit is the most significant bit
        for p in self.factors.iter().rev() {
            let m = p.matrix();
            let pm = Operator::from_fn(2, 2, |r, col| m[r][col]);
            out = out.kronecker(&pm);
        }
        out
    }

    /// Insert `extra` identity qubits at the front (used to lift a system
    /// string onto a register with the ancilla at qubit 0).
    pub fn shifted(&self, extra: usize) -> PauliString {
        let mut factors = vec![Pauli::I; extra];
        factors.extend_from_slice(&self.factors);
        PauliString {
            phase: self.phase,
            factors,
        }
    }

    /// Embed onto a larger register with factor `q` placed at `positions[q]`.
    pub fn embed(&self, num_qubits: usize, positions: &[usize]) -> Result<PauliString> {
        if positions.len() != self.num_qubits() {
            return Err(Error::QubitMismatch {
                expected: self.num_qubits(),
                found: positions.len(),
            });
        }
        let mut s = PauliString::identity(num_qubits).with_phase(self.phase);
        for (q, &pos) in positions.iter().enumerate() {
            if pos >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: pos, num_qubits });
            }
            s.factors[pos] = self.factors[q];
        }
        Ok(s)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{sign}")?;
        for p in &self.factors {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional sign prefix (`+`, `-`, `+i`, `-i`, `i`) followed by
    /// one of `IXYZ` per qubit, qubit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::PLUS_I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::PLUS, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (Phase::PLUS_I, r)
        } else {
            (Phase::PLUS, s)
        };
        let factors = rest
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' | '1' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse {
                    line: 0,
                    message: format!("bad Pauli symbol {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "empty Pauli string".into(),
            });
        }
        Ok(PauliString { phase, factors })
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Apply `P` to a flat amplitude buffer over `wires` starting at `offset`.
pub(crate) fn apply_to_buffer(p: &PauliString, buf: &mut [C64], offset: usize, conj: bool) {
    let (flip, sign, power) = p.masks();
    let flip = flip << offset;
    let sign = sign << offset;
    let mut ph = Phase(power).value();
    if conj {
        ph = ph.conj();
    }
    let src = buf.to_vec();
    for (k, &a) in src.iter().enumerate() {
        let s = if (k & sign).count_ones() % 2 == 1 { -ph } else { ph };
        buf[k ^ flip] = s * a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn all_strings(n: usize) -> Vec<PauliString> {
        let ps = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut out = vec![];
        for code in 0..4usize.pow(n as u32) {
            let factors = (0..n).map(|q| ps[(code >> (2 * q)) & 3]).collect();
            out.push(PauliString::new(Phase::PLUS, factors));
        }
        out
    }

    #[test]
    fn product_matches_dense_for_all_two_qubit_pairs() {
        let strings = all_strings(2);
        assert_eq!(strings.len(), 16);
        for a in &strings {
            for b in &strings {
                let prod = a.mul(b).unwrap();
                let dense = a.to_matrix() * b.to_matrix();
                assert!(max_abs_diff(&prod.to_matrix(), &dense) < 1e-12, "{a} * {b}");
            }
        }
    }

    #[test]
    fn hermitian_strings_square_to_identity() {
        for s in all_strings(3) {
            for ph in [Phase::PLUS, Phase::MINUS] {
                let s = s.clone().with_phase(ph);
                let sq = s.mul(&s).unwrap();
                assert_eq!(sq, PauliString::identity(3));
            }
        }
    }

    #[test]
    fn commutation_agrees_with_matrices() {
        let strings = all_strings(2);
        for a in &strings {
            for b in &strings {
                let ab = a.to_matrix() * b.to_matrix();
                let ba = b.to_matrix() * a.to_matrix();
                assert_eq!(a.commutes_with(b), max_abs_diff(&ab, &ba) < 1e-12);
            }
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["+XXXX", "-IZYX", "+iXY", "-iZ"] {
            let p: PauliString = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
        }
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn qubit_zero_is_least_significant() {
        // X on qubit 0 maps |00> (index 0) to index 1
        let p = PauliString::single(2, 0, Pauli::X).unwrap();
        let m = p.to_matrix();
        assert_eq!(m[(1, 0)], ONE);
    }
}
