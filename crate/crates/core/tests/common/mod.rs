// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reference constructions that share no code with the library.

#![allow(dead_code)]

use fermifock_core::{Circuit, Gate, HamiltonianSpec, OneQubitGate};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real(rows: usize, cols: usize, v: &[f64]) -> M {
    DMatrix::from_row_slice(rows, cols, &v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
}

pub fn eye(d: usize) -> M {
    DMatrix::identity(d, d)
}

/// Kronecker product over single-site factors listed for sites `0..k`.
/// Site `k` is bit `k` of the basis index, so the last site is the leading factor.
pub fn kron_sites(factors: &[M]) -> M {
    factors.iter().rev().fold(eye(1), |acc, f| acc.kronecker(f))
}

/// `a_j` (or `a_j^+`) on `levels` sites as `Z x .. x Z x s x I x .. x I`.
pub fn kron_ladder(create: bool, j: usize, levels: usize) -> M {
    let lower = real(2, 2, &[0.0, 1.0, 0.0, 0.0]); // |0><1|
    let z = real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let factors: Vec<M> = (0..levels)
        .map(|k| match k.cmp(&j) {
            std::cmp::Ordering::Less => z.clone(),
            std::cmp::Ordering::Equal => lower.clone(),
            std::cmp::Ordering::Greater => eye(2),
        })
        .collect();
    let a = kron_sites(&factors);
    if create {
        a.adjoint()
    } else {
        a
    }
}

pub fn number(j: usize, levels: usize) -> M {
    kron_ladder(true, j, levels) * kron_ladder(false, j, levels)
}

/// Every term of `spec` rebuilt from Kronecker ladder products.
pub fn oracle_hamiltonian(spec: &HamiltonianSpec) -> M {
    let j = spec.levels();
    let cr = |k: usize| kron_ladder(true, k, j);
    let an = |k: usize| kron_ladder(false, k, j);
    let mut h = M::zeros(1 << j, 1 << j);
    for (i, &a) in spec.alpha().iter().enumerate() {
        h += number(i, j) * c(a, 0.0);
    }
    for (&(p, q), &b) in spec.beta() {
        h += cr(p) * an(p) * cr(q) * an(q) * c(b, 0.0);
    }
    for (&(p, q), &g) in spec.gamma() {
        h += cr(p) * an(q) * g + cr(q) * an(p) * g.conj();
    }
    for (&(k, l), &v) in spec.one_body() {
        h += cr(k) * an(l) * v;
    }
    for (&[k, l, m, n], &v) in spec.two_body() {
        h += cr(l) * cr(k) * an(m) * an(n) * v;
    }
    h
}

/// `exp(-i H t)` by scaling and squaring a truncated Taylor series.
pub fn expm_taylor(h: &M, t: f64) -> M {
    let a = h * c(0.0, -t);
    let norm = a.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = a / c(2f64.powi(squarings as i32), 0.0);
    let d = h.nrows();
    let mut sum = eye(d);
    let mut term = eye(d);
    for k in 1..=30 {
        term = &term * &a / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn gate_matrix(g: &OneQubitGate) -> M {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        OneQubitGate::X => real(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        OneQubitGate::Z => real(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        OneQubitGate::H => real(2, 2, &[s, s, s, -s]),
        OneQubitGate::Phase(t) => DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, *t)]),
        OneQubitGate::Rot(h) => expm_taylor(&DMatrix::from_row_slice(2, 2, &[c(h.d1, 0.0), h.d, h.d.conj(), c(h.d2, 0.0)]), 1.0),
    }
}

/// Circuit unitary from Kronecker-embedded gate matrices.
pub fn oracle_circuit_unitary(circuit: &Circuit) -> M {
    let n = circuit.qubits();
    let mut u = eye(1 << n);
    for g in circuit.gates() {
        let step = match g {
            Gate::One { target, gate } => {
                let factors: Vec<M> = (0..n).map(|q| if q == *target { gate_matrix(gate) } else { eye(2) }).collect();
                kron_sites(&factors)
            }
            Gate::Diag { a, b, phases } => M::from_diagonal(&nalgebra::DVector::from_fn(1 << n, |x, _| {
                Complex64::from_polar(1.0, phases[2 * ((x >> a) & 1) + ((x >> b) & 1)])
            })),
        };
        u = step * u;
    }
    u
}

/// Qubit `q` of `n` sits on lower level `n - 1 - q` and upper level `n + q`.
pub fn canonical_levels(q: usize, n: usize) -> (usize, usize) {
    (n - 1 - q, n + q)
}

/// Dense `theta` for the canonical layout, built from the level formula above.
pub fn oracle_theta(n: usize) -> M {
    let mut m = M::zeros(1 << (2 * n), 1 << n);
    for x in 0..1usize << n {
        let idx: usize = (0..n)
            .map(|q| {
                let (l, u) = canonical_levels(q, n);
                if (x >> q) & 1 == 1 {
                    1 << u
                } else {
                    1 << l
                }
            })
            .sum();
        m[(idx, x)] = c(1.0, 0.0);
    }
    m
}

/// `|tr(U^+ M)| / d`.
pub fn trace_fidelity(target: &M, actual: &M) -> f64 {
    (target.adjoint() * actual).trace().norm() / target.nrows() as f64
}
