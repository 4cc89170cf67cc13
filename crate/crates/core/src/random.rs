// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded generators for test inputs.
//!
//! Everything draws from `ChaCha8Rng`, so a seed fixes the output on every
//! platform. Circuits use the gate set `{x, z, h, phase, diag}`.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, OneQubitGate};
use crate::compiler::OneQubitHamiltonian;
use crate::error::Result;
use crate::hamiltonian::HamiltonianSpec;
use crate::theta::QubitVector;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn angle<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-PI..PI)
}

fn complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// `depth` gates on `n` qubits. `diag` is only drawn when `n >= 2`.
pub fn random_circuit(n: usize, depth: usize, seed: u64) -> Result<Circuit> {
    let mut rng = rng(seed);
    let mut c = Circuit::new(n)?;
    let kinds = if n >= 2 { 5 } else { 4 };
    for _ in 0..depth {
        let t = rng.gen_range(0..n);
        match rng.gen_range(0..kinds) {
            0 => c.one(t, OneQubitGate::X)?,
            1 => c.one(t, OneQubitGate::Z)?,
            2 => c.one(t, OneQubitGate::H)?,
            3 => c.one(t, OneQubitGate::Phase(angle(&mut rng)))?,
            _ => {
                let b = (t + rng.gen_range(1..n)) % n;
                let phases = random_phases(&mut rng);
                c.diag(t, b, phases)?
            }
        };
    }
    Ok(c)
}

pub fn random_phases<R: Rng>(rng: &mut R) -> [f64; 4] {
    [angle(rng), angle(rng), angle(rng), angle(rng)]
}

/// Normalized state with uniformly drawn real and imaginary parts.
pub fn random_qubit_vector<R: Rng>(rng: &mut R, qubits: usize) -> Result<QubitVector> {
    let mut amps: Vec<Complex64> = (0..1usize << qubits).map(|_| complex(rng, 1.0)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    QubitVector::from_amplitudes(qubits, amps)
}

/// Entries in `[-pi, pi)`, so `exp(-i H)` ranges well past the identity.
pub fn random_one_qubit_hamiltonian<R: Rng>(rng: &mut R) -> OneQubitHamiltonian {
    OneQubitHamiltonian::new(angle(rng), angle(rng), complex(rng, PI))
}

pub fn random_unitary2<R: Rng>(rng: &mut R) -> Matrix2<Complex64> {
    random_one_qubit_hamiltonian(rng).exp()
}

/// Hermitian spec with every term type populated at random on `levels` levels.
pub fn random_hamiltonian_spec<R: Rng>(rng: &mut R, levels: usize) -> Result<HamiltonianSpec> {
    let mut spec = HamiltonianSpec::new(levels)?;
    for i in 0..levels {
        spec.add_alpha(i, rng.gen_range(-1.0..1.0))?;
        for j in i + 1..levels {
            spec.add_beta(i, j, rng.gen_range(-1.0..1.0))?;
            spec.add_gamma(i, j, complex(rng, 1.0))?;
        }
    }
    if levels >= 2 {
        let (k, l) = (rng.gen_range(0..levels), rng.gen_range(0..levels));
        if k == l {
            spec.add_one_body(k, k, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))?;
        } else {
            let z = complex(rng, 1.0);
            spec.add_one_body(k, l, z)?;
            spec.add_one_body(l, k, z.conj())?;
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_circuits_repeat() {
        assert_eq!(random_circuit(3, 6, 11).unwrap(), random_circuit(3, 6, 11).unwrap());
        assert_eq!(random_circuit(2, 6, 1).unwrap().gates().len(), 6);
    }

    #[test]
    fn random_specs_are_hermitian() {
        let mut r = rng(5);
        for levels in 1..=5 {
            let spec = random_hamiltonian_spec(&mut r, levels).unwrap();
            assert!(spec.assemble().unwrap().hermitian_residual() < 1e-14);
        }
    }
}
