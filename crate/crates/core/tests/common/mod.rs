//! Dense-matrix oracles shared by the integration tests. Everything here is
//! built from textbook definitions, independently of the simulator kernels.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use qae_core::qsim::{Gate, Mat2, MixedState, PureState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Dense = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn mat2(m: [[C64; 2]; 2]) -> Dense {
    Dense::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
}

pub fn single_qubit_matrix(gate: &Gate) -> Option<(usize, Dense)> {
    let half = |a: f64| (a / 2.0).cos_sin();
    let m = match *gate {
        Gate::Rx { qubit, angle } => {
            let (co, si) = half(angle);
            (
                qubit,
                [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]],
            )
        }
        Gate::Ry { qubit, angle } => {
            let (co, si) = half(angle);
            (qubit, [[c(co, 0.0), c(-si, 0.0)], [c(si, 0.0), c(co, 0.0)]])
        }
        Gate::Rz { qubit, angle } => {
            let (co, si) = half(angle);
            (qubit, [[c(co, -si), c(0.0, 0.0)], [c(0.0, 0.0), c(co, si)]])
        }
        Gate::H { qubit } => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            (qubit, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]])
        }
        Gate::X { qubit } => (
            qubit,
            [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        ),
        _ => return None,
    };
    Some((m.0, mat2(m.1)))
}

trait CosSin {
    fn cos_sin(self) -> (f64, f64);
}

impl CosSin for f64 {
    fn cos_sin(self) -> (f64, f64) {
        (self.cos(), self.sin())
    }
}

/// `I (x) ... (x) u (x) ... (x) I` with qubit 0 leftmost.
pub fn embed(u: &Dense, qubit: usize, n: usize) -> Dense {
    let mut out = Dense::identity(1, 1);
    for q in 0..n {
        let factor = if q == qubit {
            u.clone()
        } else {
            Dense::identity(2, 2)
        };
        out = out.kronecker(&factor);
    }
    out
}

fn bit(i: usize, q: usize, n: usize) -> usize {
    (i >> (n - 1 - q)) & 1
}

fn permutation(n: usize, f: impl Fn(usize) -> usize) -> Dense {
    let dim = 1 << n;
    let mut m = Dense::zeros(dim, dim);
    for i in 0..dim {
        m[(f(i), i)] = c(1.0, 0.0);
    }
    m
}

/// Full `2^n x 2^n` unitary of one gate.
pub fn gate_matrix(gate: &Gate, n: usize) -> Dense {
    if let Some((q, u)) = single_qubit_matrix(gate) {
        return embed(&u, q, n);
    }
    match *gate {
        Gate::Cnot { control, target } => permutation(n, |i| {
            if bit(i, control, n) == 1 {
                i ^ (1 << (n - 1 - target))
            } else {
                i
            }
        }),
        Gate::Cswap { control, a, b } => permutation(n, |i| {
            if bit(i, control, n) == 1 && bit(i, a, n) != bit(i, b, n) {
                i ^ (1 << (n - 1 - a)) ^ (1 << (n - 1 - b))
            } else {
                i
            }
        }),
        _ => unreachable!(),
    }
}

pub fn circuit_matrix(gates: &[Gate], n: usize) -> Dense {
    gates
        .iter()
        .fold(Dense::identity(1 << n, 1 << n), |acc, g| {
            gate_matrix(g, n) * acc
        })
}

pub fn column(psi: &PureState) -> Dense {
    Dense::from_column_slice(psi.dim(), 1, psi.amplitudes())
}

pub fn dense_of(rho: &MixedState) -> Dense {
    Dense::from_row_slice(rho.dim(), rho.dim(), rho.matrix())
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn random_state(n: usize, r: &mut impl Rng) -> PureState {
    let amps: Vec<C64> = (0..1 << n)
        .map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Random mixture of a few random pure states.
pub fn random_density(n: usize, r: &mut impl Rng) -> MixedState {
    let k = r.random_range(1..=4);
    let weights: Vec<f64> = (0..k).map(|_| r.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let dim = 1 << n;
    let mut m = Dense::zeros(dim, dim);
    for w in weights {
        let v = column(&random_state(n, r));
        m += v.clone() * v.adjoint() * c(w / total, 0.0);
    }
    MixedState::from_matrix(n, m.transpose().iter().copied().collect()).unwrap()
}

pub fn random_gate(n: usize, r: &mut impl Rng) -> Gate {
    let q = r.random_range(0..n);
    let angle = r.random_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI);
    let choices = if n >= 3 {
        7
    } else if n == 2 {
        6
    } else {
        5
    };
    match r.random_range(0..choices) {
        0 => Gate::Rx { qubit: q, angle },
        1 => Gate::Ry { qubit: q, angle },
        2 => Gate::Rz { qubit: q, angle },
        3 => Gate::H { qubit: q },
        4 => Gate::X { qubit: q },
        5 => {
            let t = (q + r.random_range(1..n)) % n;
            Gate::Cnot {
                control: q,
                target: t,
            }
        }
        _ => {
            let mut others: Vec<usize> = (0..n).filter(|&x| x != q).collect();
            let i = r.random_range(0..others.len());
            let a = others.remove(i);
            let b = others[r.random_range(0..others.len())];
            Gate::Cswap { control: q, a, b }
        }
    }
}

/// Reduced density matrix by direct index summation over all pairs of
/// basis indices that agree on the traced qubits.
pub fn partial_trace_oracle(rho: &Dense, n: usize, keep: &[usize]) -> Dense {
    let k = keep.len();
    let mut out = Dense::zeros(1 << k, 1 << k);
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let sub = |i: usize, qs: &[usize]| qs.iter().fold(0usize, |acc, &q| (acc << 1) | bit(i, q, n));
    for i in 0..1 << n {
        for j in 0..1 << n {
            if sub(i, &traced) == sub(j, &traced) {
                out[(sub(i, keep), sub(j, keep))] += rho[(i, j)];
            }
        }
    }
    out
}

/// `sum_k K_k rho K_k^dagger` with each `K_k` embedded on `qubit`.
pub fn kraus_oracle(rho: &Dense, n: usize, qubit: usize, ops: &[Mat2]) -> Dense {
    ops.iter()
        .fold(Dense::zeros(rho.nrows(), rho.ncols()), |acc, k| {
            let full = embed(&mat2(*k), qubit, n);
            acc + &full * rho * full.adjoint()
        })
}
