// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Qubit circuits and their reference (Hilbert-space) simulation.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::compiler::OneQubitHamiltonian;
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::fock::Operator;
use crate::theta::MAX_QUBITS;

type M2 = Matrix2<Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub enum OneQubitGate {
    X,
    Z,
    H,
    /// `diag(1, e^{i theta})`.
    Phase(f64),
    /// `exp(-i H)` for the given Hamiltonian.
    Rot(OneQubitHamiltonian),
}

impl OneQubitGate {
    pub fn name(&self) -> &'static str {
        match self {
            OneQubitGate::X => "x",
            OneQubitGate::Z => "z",
            OneQubitGate::H => "h",
            OneQubitGate::Phase(_) => "phase",
            OneQubitGate::Rot(_) => "rot",
        }
    }

    pub fn matrix(&self) -> M2 {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match self {
            OneQubitGate::X => M2::new(o, l, l, o),
            OneQubitGate::Z => M2::new(l, o, o, -l),
            OneQubitGate::H => M2::new(l, l, l, -l) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            OneQubitGate::Phase(theta) => M2::new(l, o, o, Complex64::from_polar(1.0, *theta)),
            OneQubitGate::Rot(h) => h.exp(),
        }
    }

    fn params_finite(&self) -> bool {
        match self {
            OneQubitGate::Phase(t) => t.is_finite(),
            OneQubitGate::Rot(h) => [h.d1, h.d2, h.d.re, h.d.im].iter().all(|v| v.is_finite()),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    One { target: usize, gate: OneQubitGate },
    /// Multiplies `|x y>` (x on qubit `a`, y on qubit `b`) by `e^{i phases[2x + y]}`.
    Diag { a: usize, b: usize, phases: [f64; 4] },
}

impl Gate {
    /// Phase picked up by `|11>` relative to the product of local phases.
    /// Nonzero (mod 2pi) exactly when the gate is entangling.
    pub fn interaction_angle(phases: &[f64; 4]) -> f64 {
        phases[0] - phases[1] - phases[2] + phases[3]
    }
}

/// Operator Schmidt rank of a two-qubit diagonal unitary `diag(e^{i phi})`:
/// 1 for products of local phases, 2 otherwise.
pub fn diagonal_schmidt_rank(phases: &[f64; 4]) -> usize {
    let e = |k: usize| Complex64::from_polar(1.0, phases[k]);
    let det = e(0) * e(3) - e(1) * e(2);
    if det.norm() > 1e-9 {
        2
    } else {
        1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::QubitCount {
                n: qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(Circuit {
            qubits,
            gates: Vec::new(),
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    fn check_target(&self, q: usize) -> Result<()> {
        if q < self.qubits {
            Ok(())
        } else {
            Err(Error::InvalidCircuit(format!(
                "target {q} out of range for {} qubits",
                self.qubits
            )))
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        match &gate {
            Gate::One { target, gate } => {
                self.check_target(*target)?;
                if !gate.params_finite() {
                    return Err(Error::InvalidCircuit(format!("non-finite parameter on {}", gate.name())));
                }
            }
            Gate::Diag { a, b, phases } => {
                self.check_target(*a)?;
                self.check_target(*b)?;
                if a == b {
                    return Err(Error::InvalidCircuit(format!("diag needs two distinct qubits, got {a} twice")));
                }
                if !phases.iter().all(|p| p.is_finite()) {
                    return Err(Error::InvalidCircuit("non-finite diag phase".into()));
                }
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn one(&mut self, target: usize, gate: OneQubitGate) -> Result<&mut Self> {
        self.push(Gate::One { target, gate })
    }

    pub fn diag(&mut self, a: usize, b: usize, phases: [f64; 4]) -> Result<&mut Self> {
        self.push(Gate::Diag { a, b, phases })
    }

    pub fn has_entangling_gate(&self) -> bool {
        self.gates.iter().any(|g| match g {
            Gate::Diag { phases, .. } => diagonal_schmidt_rank(phases) > 1,
            _ => false,
        })
    }

    /// Product of all gate unitaries, first gate applied first.
    pub fn unitary(&self) -> Result<Operator> {
        self.unitary_with(ExecMode::default())
    }

    pub fn unitary_with(&self, mode: ExecMode) -> Result<Operator> {
        let mats: Vec<_> = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::One { gate, .. } => Some(gate.matrix()),
                Gate::Diag { .. } => None,
            })
            .collect();
        Operator::from_columns(self.qubits, mode, |col, column| {
            column[col] = Complex64::new(1.0, 0.0);
            for (g, m) in self.gates.iter().zip(&mats) {
                match g {
                    Gate::One { target, .. } => apply_one_qubit(column, m.as_ref().unwrap(), *target),
                    Gate::Diag { a, b, phases } => apply_diag(column, *a, *b, phases),
                }
            }
        })
    }
}

/// Apply a 2x2 unitary to qubit `q` of a state vector in place.
pub fn apply_one_qubit(amps: &mut [Complex64], u: &M2, q: usize) {
    let bit = 1usize << q;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let (a0, a1) = (amps[i], amps[i | bit]);
            amps[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            amps[i | bit] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
    }
}

pub fn apply_diag(amps: &mut [Complex64], a: usize, b: usize, phases: &[f64; 4]) {
    let factors: Vec<_> = phases.iter().map(|p| Complex64::from_polar(1.0, *p)).collect();
    for (i, amp) in amps.iter_mut().enumerate() {
        let k = 2 * ((i >> a) & 1) + ((i >> b) & 1);
        *amp *= factors[k];
    }
}

/// `u` acting on qubit `q` of an `n`-qubit register, identity elsewhere.
pub fn embed_one_qubit(u: &M2, q: usize, n: usize) -> Result<Operator> {
    if q >= n {
        return Err(Error::InvalidCircuit(format!("target {q} out of range for {n} qubits")));
    }
    Operator::from_columns(n, ExecMode::default(), |col, column| {
        column[col] = Complex64::new(1.0, 0.0);
        apply_one_qubit(column, u, q);
    })
}

/// Two-qubit diagonal gate embedded in an `n`-qubit register.
pub fn embed_diagonal(phases: &[f64; 4], a: usize, b: usize, n: usize) -> Result<Operator> {
    if a >= n || b >= n || a == b {
        return Err(Error::InvalidCircuit(format!("bad diag targets ({a}, {b}) for {n} qubits")));
    }
    Operator::from_columns(n, ExecMode::default(), |col, column| {
        column[col] = Complex64::new(1.0, 0.0);
        apply_diag(column, a, b, phases);
    })
}
