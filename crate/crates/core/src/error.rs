// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level {level} out of range for {levels} levels")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("{levels} levels exceeds the cap of {max}")]
    TooManyLevels { levels: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("operator is not Hermitian (residual {residual:e})")]
    NonHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NonUnitary { residual: f64 },

    #[error("invalid duration {0}: durations must be finite and non-negative")]
    InvalidDuration(f64),

    #[error("qubit count {n} outside the supported range 1..={max}")]
    QubitCount { n: usize, max: usize },

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("state has no component inside the computational subspace")]
    OutsideSubspace,

    #[error("tunneling sign on pair {pair} depends on the occupation of other levels")]
    StateDependentSign { pair: usize },

    #[error("unsupported fixed interaction: {0}")]
    UnsupportedTopology(String),

    #[error("entangling gate on qubits ({a}, {b}) needs a nonzero fixed coupling")]
    ZeroCoupling { a: usize, b: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
