// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact time evolution `U = exp(-i H t)` with `hbar = 1`.
//!
//! The propagator is built from a Hermitian eigendecomposition, so the result
//! is unitary up to roundoff. Diagonal Hamiltonians skip the decomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, Operator};
use crate::hamiltonian::{assemble, HamiltonianSpec};

/// Hermiticity tolerance (relative to `max(1, ||H||_F)`) for evolution inputs.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// Spectral form of a Hermitian matrix, reusable for any duration.
#[derive(Clone, Debug)]
pub struct Propagator {
    levels: usize,
    eigenvalues: DVector<f64>,
    // None for diagonal input: the basis is the eigenbasis.
    eigenvectors: Option<DMatrix<Complex64>>,
}

impl Propagator {
    pub fn new(h: &Operator) -> Result<Self> {
        let mut p = Self::from_matrix(h.matrix())?;
        p.levels = h.levels();
        Ok(p)
    }

    /// Decompose any square Hermitian matrix, e.g. a Hamiltonian restricted to a sector.
    pub fn from_matrix(h: &DMatrix<Complex64>) -> Result<Self> {
        let residual = (h - h.adjoint()).norm();
        if residual > HERMITIAN_INPUT_TOL * h.norm().max(1.0) {
            return Err(Error::NonHermitian { residual });
        }
        let dim = h.nrows();
        let diagonal = (0..dim).all(|c| (0..dim).all(|r| r == c || h[(r, c)] == Complex64::new(0.0, 0.0)));
        if diagonal {
            return Ok(Propagator {
                levels: 0,
                eigenvalues: h.diagonal().map(|z| z.re),
                eigenvectors: None,
            });
        }
        let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        Ok(Propagator {
            levels: 0,
            eigenvalues: eig.eigenvalues,
            eigenvectors: Some(eig.eigenvectors),
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    fn phases(&self, t: f64) -> DVector<Complex64> {
        self.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t))
    }

    /// `exp(-i H t)` as a bare matrix.
    pub fn matrix_at(&self, t: f64) -> DMatrix<Complex64> {
        let phases = self.phases(t);
        match &self.eigenvectors {
            None => DMatrix::from_diagonal(&phases),
            Some(v) => {
                let mut scaled = v.clone();
                for (k, mut col) in scaled.column_iter_mut().enumerate() {
                    col *= phases[k];
                }
                scaled * v.adjoint()
            }
        }
    }

    /// `exp(-i H t)`. Only for propagators built with [`Propagator::new`].
    pub fn at(&self, t: f64) -> Operator {
        Operator::from_matrix(self.levels, self.matrix_at(t)).expect("built from an operator")
    }

    /// Replace `states` by `exp(-i H t) states` without forming the propagator.
    pub fn apply(&self, t: f64, states: &mut DMatrix<Complex64>) {
        let phases = self.phases(t);
        match &self.eigenvectors {
            None => {
                for (r, mut row) in states.row_iter_mut().enumerate() {
                    row *= phases[r];
                }
            }
            Some(v) => {
                let mut coeffs = v.adjoint() * &*states;
                for (r, mut row) in coeffs.row_iter_mut().enumerate() {
                    row *= phases[r];
                }
                *states = v * coeffs;
            }
        }
    }
}

/// `exp(-i H t)` for Hermitian `h`.
pub fn unitary(h: &Operator, t: f64) -> Result<Operator> {
    if !t.is_finite() {
        return Err(Error::InvalidDuration(t));
    }
    Ok(Propagator::new(h)?.at(t))
}

/// A piecewise-constant stretch of evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionSegment {
    hamiltonian: HamiltonianSpec,
    duration: f64,
}

impl EvolutionSegment {
    pub fn new(hamiltonian: HamiltonianSpec, duration: f64) -> Result<Self> {
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::InvalidDuration(duration));
        }
        Ok(EvolutionSegment {
            hamiltonian,
            duration,
        })
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn unitary(&self) -> Result<Operator> {
        unitary(&assemble(&self.hamiltonian)?, self.duration)
    }
}

/// Apply the segments to `v` in list order.
pub fn evolve(v: &FockVector, segments: &[EvolutionSegment]) -> Result<FockVector> {
    let mut state = v.clone();
    for seg in segments {
        if seg.hamiltonian.levels() != state.levels() {
            return Err(Error::DimensionMismatch {
                expected: state.dim(),
                found: 1 << seg.hamiltonian.levels(),
            });
        }
        if seg.duration == 0.0 {
            continue;
        }
        state = seg.unitary()?.apply(&state)?;
    }
    Ok(state)
}
