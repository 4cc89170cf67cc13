// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-sided runs: the qubit circuit simulated directly versus the compiled
//! Fock-space schedule, summarized as a JSON report.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{embed_diagonal, embed_one_qubit, Circuit, Gate};
use crate::circuit_io::read_circuit;
use crate::compiler::{
    compile_circuit, hamiltonian_log, lift_diagonal, lift_one_qubit, lifted_residual, validate_schedule_json,
    FixedInteraction, ScheduleStats,
};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::theta::ThetaEncoding;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Per-gate diagram residuals only.
    VerifyDiagrams,
    /// Residuals plus the compiled schedule's fidelity and leakage.
    Simulate,
    /// Compile and schema-check the schedule.
    CompileOnly,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::VerifyDiagrams => "verify-diagrams",
            Mode::Simulate => "simulate",
            Mode::CompileOnly => "compile-only",
        }
    }
}

/// Pass thresholds. Fidelity passes at `>= 1 - fidelity`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub fidelity: f64,
    pub leakage: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fidelity: 1e-6,
            leakage: 1e-8,
            residual: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub circuit: PathBuf,
    pub coupling: f64,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateResidual {
    pub index: usize,
    pub gate: String,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSummary {
    #[serde(flatten)]
    pub stats: ScheduleStats,
    pub program: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub mode: Mode,
    pub qubits: usize,
    pub coupling: f64,
    pub encoding: ThetaEncoding,
    pub tolerances: Tolerances,
    pub residuals: Vec<GateResidual>,
    pub fidelity: Option<f64>,
    pub leakage: Option<f64>,
    pub schedule: Option<ScheduleSummary>,
    pub pass: bool,
}

fn gate_label(g: &Gate) -> String {
    match g {
        Gate::One { target, gate } => format!("{} {target}", gate.name()),
        Gate::Diag { a, b, .. } => format!("diag {a} {b}"),
    }
}

/// Residual of the lifted Hamiltonian for one gate against the gate itself.
fn gate_residual(g: &Gate, enc: &ThetaEncoding) -> Result<f64> {
    let n = enc.qubits();
    match g {
        Gate::One { target, gate } => {
            let u = gate.matrix();
            let spec = lift_one_qubit(&hamiltonian_log(&u)?, *target, enc)?;
            lifted_residual(&spec, &embed_one_qubit(&u, *target, n)?, enc)
        }
        Gate::Diag { a, b, phases } => {
            let lift = lift_diagonal(phases, (*a, *b), enc)?;
            let target = embed_diagonal(phases, *a, *b, n)?.scale(Complex64::from_polar(1.0, -lift.global_phase));
            lifted_residual(&lift.spec, &target, enc)
        }
    }
}

fn check_coupling(circuit: &Circuit, g: f64) -> Result<()> {
    if !g.is_finite() {
        return Err(Error::InvalidCoefficient(format!("coupling must be finite, got {g}")));
    }
    if circuit.has_entangling_gate() && g <= 0.0 {
        return Err(Error::InvalidCoefficient(format!(
            "coupling must be positive for a circuit with entangling gates, got {g}"
        )));
    }
    Ok(())
}

/// Run `mode` on an in-memory circuit. `exec_mode` only affects the per-gate loop.
pub fn evaluate(circuit: &Circuit, coupling: f64, mode: Mode, tol: Tolerances, exec_mode: ExecMode) -> Result<Report> {
    check_coupling(circuit, coupling)?;
    let enc = ThetaEncoding::canonical(circuit.qubits())?;
    let mut pass = true;

    let residuals = if mode == Mode::CompileOnly {
        Vec::new()
    } else {
        let values = exec::map_coarse(exec_mode, circuit.gates(), |g| gate_residual(g, &enc));
        let mut out = Vec::with_capacity(values.len());
        for (index, (g, r)) in circuit.gates().iter().zip(values).enumerate() {
            let residual = r?;
            pass &= residual <= tol.residual;
            out.push(GateResidual {
                index,
                gate: gate_label(g),
                residual,
            });
        }
        out
    };

    let (mut fidelity, mut leakage, mut schedule) = (None, None, None);
    if mode != Mode::VerifyDiagrams {
        let fixed = FixedInteraction::nearest_neighbor(&enc, coupling)?;
        let sched = compile_circuit(circuit, &fixed, &enc)?;
        let program = sched.to_value();
        pass &= validate_schedule_json(&program).is_ok();
        if mode == Mode::Simulate {
            let run = sched.encoded_propagation()?;
            let f = run.fidelity(&circuit.unitary_with(exec_mode)?)?;
            let l = run.worst_leakage();
            pass &= f >= 1.0 - tol.fidelity && l <= tol.leakage;
            fidelity = Some(f);
            leakage = Some(l);
        }
        schedule = Some(ScheduleSummary {
            stats: sched.stats(),
            program,
        });
    }

    Ok(Report {
        mode,
        qubits: circuit.qubits(),
        coupling,
        encoding: enc,
        tolerances: tol,
        residuals,
        fidelity,
        leakage,
        schedule,
        pass,
    })
}

/// Evaluate a circuit file, writing the report when an output path is set.
pub fn run(config: &RunConfig) -> Result<Report> {
    let circuit = read_circuit(&config.circuit)?;
    let report = evaluate(&circuit, config.coupling, config.mode, config.tolerances, ExecMode::Sequential)?;
    if let Some(out) = &config.out {
        std::fs::write(out, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(report)
}

/// Independent runs, concurrently under [`ExecMode::Parallel`].
pub fn run_batch(configs: &[RunConfig], mode: ExecMode) -> Vec<Result<Report>> {
    exec::map_coarse(mode, configs, run)
}
