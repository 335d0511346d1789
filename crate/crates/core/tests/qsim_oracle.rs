mod common;

use common::*;
use qae_core::qsim::{MixedState, PureState};
use rand::Rng;

/// Random nonempty, strictly increasing subset of `0..n`.
fn random_keep(n: usize, r: &mut impl Rng) -> Vec<usize> {
    loop {
        let keep: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
        if !keep.is_empty() {
            return keep;
        }
    }
}

#[test]
fn pure_state_kernels_match_dense_multiplication() {
    let mut r = rng(11);
    for _ in 0..150 {
        let n = r.random_range(1..=4);
        let len = r.random_range(1..=30);
        let gates: Vec<_> = (0..len).map(|_| random_gate(n, &mut r)).collect();
        let input = random_state(n, &mut r);
        let mut out = input.clone();
        out.apply_all(&gates).unwrap();
        let expected = circuit_matrix(&gates, n) * column(&input);
        assert!(max_diff(&column(&out), &expected) < 1e-10, "{gates:?}");
    }
}

#[test]
fn density_kernels_match_dense_conjugation() {
    let mut r = rng(12);
    for _ in 0..120 {
        let n = r.random_range(1..=4);
        let len = r.random_range(1..=30);
        let gates: Vec<_> = (0..len).map(|_| random_gate(n, &mut r)).collect();
        let rho = random_density(n, &mut r);
        let mut out = rho.clone();
        for g in &gates {
            out.apply(g).unwrap();
        }
        let u = circuit_matrix(&gates, n);
        let expected = &u * dense_of(&rho) * u.adjoint();
        assert!(max_diff(&dense_of(&out), &expected) < 1e-10);
    }
}

#[test]
fn partial_trace_matches_index_summation() {
    let mut r = rng(13);
    for _ in 0..150 {
        let n = r.random_range(1..=4);
        let keep = random_keep(n, &mut r);
        let rho = random_density(n, &mut r);
        let reduced = rho.partial_trace(&keep).unwrap();
        let expected = partial_trace_oracle(&dense_of(&rho), n, &keep);
        assert!(
            max_diff(&dense_of(&reduced), &expected) < 1e-10,
            "keep {keep:?}"
        );
        assert!((reduced.trace().re - 1.0).abs() < 1e-10);
    }
}

#[test]
fn pure_partial_trace_agrees_with_density_route() {
    let mut r = rng(14);
    for _ in 0..50 {
        let n = r.random_range(2..=4);
        let keep = random_keep(n, &mut r);
        let psi = random_state(n, &mut r);
        let via_pure = psi.partial_trace(&keep).unwrap();
        let expected = partial_trace_oracle(&dense_of(&MixedState::from_pure(&psi)), n, &keep);
        assert!(max_diff(&dense_of(&via_pure), &expected) < 1e-10);
    }
}

#[test]
fn probabilities_are_born_rule() {
    let mut r = rng(15);
    for _ in 0..30 {
        let n = r.random_range(1..=4);
        let psi: PureState = random_state(n, &mut r);
        let p = psi.probabilities();
        for (i, a) in psi.amplitudes().iter().enumerate() {
            assert!((p[i] - a.norm_sqr()).abs() < 1e-15);
        }
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn empty_keep_is_rejected() {
    let rho = random_density(2, &mut rng(16));
    assert!(rho.partial_trace(&[]).is_err());
    assert!(rho.partial_trace(&[1, 0]).is_err());
}
