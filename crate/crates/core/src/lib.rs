// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fermionic computation in the occupation-number representation.
//!
//! A register of `J` fermionic levels is modelled as the `2^J`-dimensional Fock
//! space, with Hamiltonians assembled from per-level and per-pair coefficients.
//! Qubits embed into it through a dual-rail map: one particle per pair of levels
//! straddling the Fermi bound.
//! Circuits are compiled into pulse schedules that only touch the field and
//! tunneling coefficients while a fixed diagonal interaction acts permanently.
//!
//! Basis conventions used throughout:
//!
//! * Levels are addressed by their 0-based position in the energy-ordered list.
//!   Bit `k` of a basis index is the occupation of position `k`.
//! * For `n` logical pairs the order is `(n, n-1, .., 1, 1', 2', .., n')`, so the
//!   Fermi bound sits between positions `n - 1` and `n`.
//! * Qubit basis index bit `q` is the value of qubit `q`, which lives on pair `q + 1`.

pub mod circuit;
pub mod circuit_io;
pub mod compiler;
pub mod error;
pub mod evolution;
pub mod exec;
pub mod fock;
pub mod hamiltonian;
pub mod random;
pub mod report;
pub mod theta;

pub use num_complex::Complex64;

pub use circuit::{Circuit, Gate, OneQubitGate};
pub use compiler::{
    compile_circuit, hamiltonian_log, lift_diagonal, lift_one_qubit, verify_diagram,
    DiagonalLift, FixedInteraction, OneQubitHamiltonian, PulseSchedule, Segment,
};
pub use error::{Error, Result};
pub use evolution::{evolve, unitary, EvolutionSegment, Propagator};
pub use exec::ExecMode;
pub use fock::{
    apply_annihilate, apply_create, apply_operator, ladder_matrix, FockState, FockVector,
    LadderKind, LevelIndex, Operator, SignedState, DENSE_MAX_LEVELS, MAX_LEVELS,
};
pub use hamiltonian::{
    assemble, build_diagonal, build_external, build_one_body, build_tunneling, build_two_body,
    HamiltonianSpec,
};
pub use report::{run, run_batch, Mode, Report, RunConfig, Tolerances};
pub use theta::{decode, encode, projector_f, tunneling_sign, Decoded, QubitVector, SubspaceF, ThetaEncoding};
