//! In-place gate kernels.
//!
//! Vector kernels act on amplitude vectors. Matrix kernels act on row-major
//! `dim x dim` matrices: `left_*` multiplies from the left (`M -> U M`),
//! `right_*_adjoint` from the right by the adjoint (`M -> M U^dagger`).

use super::{qubit_mask, Gate, Mat2, C64};

#[inline]
fn mul2(m: &Mat2, a: C64, b: C64) -> (C64, C64) {
    (m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
}

pub(crate) fn apply_1q_vec(amps: &mut [C64], num_qubits: usize, qubit: usize, m: &Mat2) {
    let mask = qubit_mask(num_qubits, qubit);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let j = i | mask;
            let (a, b) = mul2(m, amps[i], amps[j]);
            amps[i] = a;
            amps[j] = b;
        }
    }
}

/// Calls `f(i, j)` for every index pair swapped by a permutation gate.
fn for_each_swap(gate: &Gate, num_qubits: usize, mut f: impl FnMut(usize, usize)) {
    let dim = 1usize << num_qubits;
    match *gate {
        Gate::Cnot { control, target } => {
            let cm = qubit_mask(num_qubits, control);
            let tm = qubit_mask(num_qubits, target);
            for i in 0..dim {
                if i & cm != 0 && i & tm == 0 {
                    f(i, i | tm);
                }
            }
        }
        Gate::Cswap { control, a, b } => {
            let cm = qubit_mask(num_qubits, control);
            let am = qubit_mask(num_qubits, a);
            let bm = qubit_mask(num_qubits, b);
            for i in 0..dim {
                if i & cm != 0 && i & am != 0 && i & bm == 0 {
                    f(i, (i & !am) | bm);
                }
            }
        }
        _ => unreachable!("not a permutation gate"),
    }
}

/// Applies a validated gate to an amplitude vector.
pub(crate) fn apply_gate_vec(amps: &mut [C64], num_qubits: usize, gate: &Gate) {
    match gate.single_qubit_matrix() {
        Some((q, m)) => apply_1q_vec(amps, num_qubits, q, &m),
        None => for_each_swap(gate, num_qubits, |i, j| amps.swap(i, j)),
    }
}

pub(crate) fn left_1q(mat: &mut [C64], num_qubits: usize, qubit: usize, m: &Mat2) {
    let dim = 1usize << num_qubits;
    let mask = qubit_mask(num_qubits, qubit);
    for i in 0..dim {
        if i & mask != 0 {
            continue;
        }
        let j = i | mask;
        let (ri, rj) = (i * dim, j * dim);
        for c in 0..dim {
            let (a, b) = mul2(m, mat[ri + c], mat[rj + c]);
            mat[ri + c] = a;
            mat[rj + c] = b;
        }
    }
}

pub(crate) fn right_1q_adjoint(mat: &mut [C64], num_qubits: usize, qubit: usize, m: &Mat2) {
    let dim = 1usize << num_qubits;
    let mask = qubit_mask(num_qubits, qubit);
    let conj = [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ];
    for r in 0..dim {
        let row = &mut mat[r * dim..(r + 1) * dim];
        for i in 0..dim {
            if i & mask == 0 {
                let j = i | mask;
                let (a, b) = mul2(&conj, row[i], row[j]);
                row[i] = a;
                row[j] = b;
            }
        }
    }
}

/// `M -> U M U^dagger` for a validated gate.
pub(crate) fn conjugate_gate_mat(mat: &mut [C64], num_qubits: usize, gate: &Gate) {
    match gate.single_qubit_matrix() {
        Some((q, m)) => {
            left_1q(mat, num_qubits, q, &m);
            right_1q_adjoint(mat, num_qubits, q, &m);
        }
        None => {
            let dim = 1usize << num_qubits;
            for_each_swap(gate, num_qubits, |i, j| {
                for c in 0..dim {
                    mat.swap(i * dim + c, j * dim + c);
                }
            });
            for_each_swap(gate, num_qubits, |i, j| {
                for r in 0..dim {
                    mat.swap(r * dim + i, r * dim + j);
                }
            });
        }
    }
}

/// `M -> sum_k K_k M K_k^dagger` for single-qubit operators `K_k`.
pub(crate) fn kraus_sum_mat(mat: &mut [C64], num_qubits: usize, qubit: usize, ops: &[Mat2]) {
    let mut acc = vec![C64::new(0.0, 0.0); mat.len()];
    let mut scratch = vec![C64::new(0.0, 0.0); mat.len()];
    for k in ops {
        scratch.copy_from_slice(mat);
        left_1q(&mut scratch, num_qubits, qubit, k);
        right_1q_adjoint(&mut scratch, num_qubits, qubit, k);
        for (a, s) in acc.iter_mut().zip(&scratch) {
            *a += s;
        }
    }
    mat.copy_from_slice(&acc);
}
