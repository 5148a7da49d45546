//! In-place kernels on flat amplitude buffers.
//!
//! A buffer of length `2^k` is indexed little-endian: bit `b` of the index is
//! the state of "wire" `b`. Pure states use one wire per qubit; density
//! matrices are stored column-major so rows occupy wires `0..n` and columns
//! wires `n..2n`.

use crate::linalg::C64;

pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[C64; 4]; 4];

pub fn apply_1q(buf: &mut [C64], wire: usize, m: &Mat2) {
    let stride = 1usize << wire;
    let len = buf.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let j = i + stride;
            let a = buf[i];
            let b = buf[j];
            buf[i] = m[0][0] * a + m[0][1] * b;
            buf[j] = m[1][0] * a + m[1][1] * b;
        }
        base += stride << 1;
    }
}

/// Two-wire gate. Local basis index is `bit(wire_a) + 2 * bit(wire_b)`.
pub fn apply_2q(buf: &mut [C64], wire_a: usize, wire_b: usize, m: &Mat4) {
    debug_assert_ne!(wire_a, wire_b);
    let ma = 1usize << wire_a;
    let mb = 1usize << wire_b;
    for k in 0..buf.len() {
        if k & (ma | mb) != 0 {
            continue;
        }
        let idx = [k, k | ma, k | mb, k | ma | mb];
        let v = [buf[idx[0]], buf[idx[1]], buf[idx[2]], buf[idx[3]]];
        for (r, &i) in idx.iter().enumerate() {
            buf[i] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

pub fn apply_diag<F: Fn(usize) -> C64>(buf: &mut [C64], phase: F) {
    for (k, a) in buf.iter_mut().enumerate() {
        *a *= phase(k);
    }
}

pub fn conj2(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}

pub fn conj4(m: &Mat4) -> Mat4 {
    let mut out = *m;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = x.conj();
        }
    }
    out
}

pub fn adjoint2(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}
