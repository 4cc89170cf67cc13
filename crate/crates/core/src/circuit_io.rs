// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented circuit files.
//!
//! ```text
//! qubits 2
//! gate h 0            # x, z, h take a target only
//! gate phase 1 0.25   # diag(1, e^{i theta})
//! gate rot 0 0.1 0.2 0.3 -0.4   # d1 d2 re(d) im(d): exp(-i H) directly
//! diag 0 1 0 0 0 3.141592653589793
//! ```
//!
//! `#` starts a comment. Blank lines are ignored. Angles are radians.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, OneQubitGate};
use crate::compiler::OneQubitHamiltonian;
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &str, what: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

fn arity(tokens: &[&str], expected: usize, what: &str, line: usize) -> Result<()> {
    if tokens.len() == expected {
        Ok(())
    } else {
        Err(parse_err(
            line,
            format!("{what} expects {} arguments, got {}", expected - 1, tokens.len() - 1),
        ))
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let Some(&head) = tokens.first() else {
            continue;
        };
        let Some(c) = circuit.as_mut() else {
            if head != "qubits" {
                return Err(parse_err(line, "expected header 'qubits <n>'"));
            }
            arity(&tokens, 2, "qubits", line)?;
            let n: usize = number(tokens[1], "qubit count", line)?;
            circuit = Some(Circuit::new(n).map_err(|e| parse_err(line, e.to_string()))?);
            continue;
        };
        let gate = match head {
            "gate" => parse_gate(&tokens, line)?,
            "diag" => {
                arity(&tokens, 7, "diag", line)?;
                let mut phases = [0.0; 4];
                for (p, tok) in phases.iter_mut().zip(&tokens[3..]) {
                    *p = number(tok, "angle", line)?;
                }
                Gate::Diag {
                    a: number(tokens[1], "target", line)?,
                    b: number(tokens[2], "target", line)?,
                    phases,
                }
            }
            "qubits" => return Err(parse_err(line, "duplicate 'qubits' header")),
            other => return Err(parse_err(line, format!("unknown directive '{other}'"))),
        };
        c.push(gate).map_err(|e| parse_err(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| parse_err(1, "missing 'qubits <n>' header"))
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate> {
    let Some(&name) = tokens.get(1) else {
        return Err(parse_err(line, "gate needs a name"));
    };
    let expected = match name {
        "x" | "z" | "h" => 3,
        "phase" => 4,
        "rot" => 7,
        other => return Err(parse_err(line, format!("unknown gate '{other}'"))),
    };
    arity(&tokens[1..], expected - 1, name, line)?;
    let target = number(tokens[2], "target", line)?;
    let f = |k: usize| number::<f64>(tokens[k], "angle", line);
    let gate = match name {
        "x" => OneQubitGate::X,
        "z" => OneQubitGate::Z,
        "h" => OneQubitGate::H,
        "phase" => OneQubitGate::Phase(f(3)?),
        _ => OneQubitGate::Rot(OneQubitHamiltonian::new(f(3)?, f(4)?, Complex64::new(f(5)?, f(6)?))),
    };
    Ok(Gate::One { target, gate })
}

pub fn read_circuit(path: &Path) -> Result<Circuit> {
    parse_circuit(&std::fs::read_to_string(path)?)
}

/// Inverse of [`parse_circuit`]. Floats use the shortest exact representation.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.qubits());
    for g in circuit.gates() {
        match g {
            Gate::One { target, gate } => {
                let _ = match gate {
                    OneQubitGate::Phase(t) => writeln!(out, "gate phase {target} {t:?}"),
                    OneQubitGate::Rot(h) => writeln!(
                        out,
                        "gate rot {target} {:?} {:?} {:?} {:?}",
                        h.d1, h.d2, h.d.re, h.d.im
                    ),
                    other => writeln!(out, "gate {} {target}", other.name()),
                };
            }
            Gate::Diag { a, b, phases } => {
                let _ = writeln!(
                    out,
                    "diag {a} {b} {:?} {:?} {:?} {:?}",
                    phases[0], phases[1], phases[2], phases[3]
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_flip() {
        let c = parse_circuit("qubits 1\ngate x 0").unwrap();
        assert_eq!(c.qubits(), 1);
        assert_eq!(
            c.gates(),
            &[Gate::One {
                target: 0,
                gate: OneQubitGate::X
            }]
        );
    }

    #[test]
    fn controlled_phase() {
        let c = parse_circuit("qubits 2\ndiag 0 1 0 0 0 3.141592653589793").unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::Diag {
                a: 0,
                b: 1,
                phases: [0.0, 0.0, 0.0, PI]
            }]
        );
    }

    #[test]
    fn unknown_gate_message() {
        let err = parse_circuit("qubits 2\ngate q 0").unwrap_err();
        assert_eq!(err.to_string(), "unknown gate 'q' at line 2");
    }

    #[test]
    fn errors_carry_lines() {
        let cases = [
            ("qubits 2\n\n# c\ngate x 2", 4),
            ("qubits 2\ngate phase 0", 2),
            ("qubits 2\ngate x 0 1", 2),
            ("gate x 0", 1),
            ("qubits 2\ndiag 0 1 0 0 0", 2),
            ("qubits 2\ndiag 0 0 0 0 0 0", 2),
            ("qubits 2\ngate phase 0 abc", 2),
            ("qubits 0", 1),
            ("qubits 1\nqubits 1", 2),
        ];
        for (text, line) in cases {
            match parse_circuit(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_rot() {
        let c = parse_circuit("# header\nqubits 1 # one\n  gate rot 0 0.5 -0.5 0.25 1e-3\n").unwrap();
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert_eq!(back, c);
    }
}
