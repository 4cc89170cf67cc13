// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! `fermifock <mode> --circuit <path> --coupling <g> [--out <path>] [--tol-fidelity <eps>]`
//!
//! Exit status: 0 when every report passes, 1 on a tolerance failure. Anything
//! that prevents a report (bad usage, unreadable input, rejected circuit) gives 2.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fermifock_core::{run_batch, ExecMode, Mode, Report, RunConfig, Tolerances};

#[derive(Parser)]
#[command(name = "fermifock", version, about = "Compile qubit circuits to fermionic pulse schedules and verify them")]
struct Cli {
    #[command(subcommand)]
    mode: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check each gate's lifted Hamiltonian against the gate.
    VerifyDiagrams(RunArgs),
    /// Compile, then compare the pulse schedule against the circuit.
    Simulate(RunArgs),
    /// Compile and emit the schedule only.
    CompileOnly(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Circuit file. Repeat to process several files concurrently.
    #[arg(long, required = true)]
    circuit: Vec<PathBuf>,
    /// Strength g of the fixed nearest-neighbour interaction.
    #[arg(long, allow_negative_numbers = true)]
    coupling: f64,
    /// Report path. With several circuits, a directory receiving `<stem>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pass when fidelity >= 1 - this.
    #[arg(long, allow_negative_numbers = true, default_value_t = Tolerances::default().fidelity)]
    tol_fidelity: f64,
    /// Largest accepted leakage out of the encoded subspace.
    #[arg(long, allow_negative_numbers = true, default_value_t = Tolerances::default().leakage)]
    tol_leakage: f64,
    /// Largest accepted per-gate lifting residual.
    #[arg(long, allow_negative_numbers = true, default_value_t = Tolerances::default().residual)]
    tol_residual: f64,
    /// Process batches one file at a time.
    #[arg(long)]
    sequential: bool,
}

fn out_path(out: &Option<PathBuf>, circuit: &Path, batch: bool) -> Option<PathBuf> {
    let out = out.as_ref()?;
    if !batch {
        return Some(out.clone());
    }
    let stem = circuit.file_stem().map(|s| s.to_os_string()).unwrap_or_else(|| "report".into());
    Some(out.join(stem).with_extension("json"))
}

fn summary(path: &Path, r: &Report) -> String {
    let mut line = format!("{}: {}", path.display(), if r.pass { "pass" } else { "FAIL" });
    if let Some(f) = r.fidelity {
        line += &format!(" fidelity={f:.12}");
    }
    if let Some(l) = r.leakage {
        line += &format!(" leakage={l:.3e}");
    }
    if let Some(worst) = r.residuals.iter().map(|g| g.residual).reduce(f64::max) {
        line += &format!(" max_residual={worst:.3e}");
    }
    if let Some(s) = &r.schedule {
        line += &format!(" segments={} duration={:.6}", s.stats.segments, s.stats.total_duration);
    }
    line
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.mode {
        Command::VerifyDiagrams(a) => (Mode::VerifyDiagrams, a),
        Command::Simulate(a) => (Mode::Simulate, a),
        Command::CompileOnly(a) => (Mode::CompileOnly, a),
    };
    let tolerances = Tolerances {
        fidelity: args.tol_fidelity,
        leakage: args.tol_leakage,
        residual: args.tol_residual,
    };
    let batch = args.circuit.len() > 1;
    if batch {
        if let Some(dir) = &args.out {
            if let Err(e) = std::fs::create_dir_all(dir) {
                eprintln!("error: cannot create {}: {e}", dir.display());
                return ExitCode::from(2);
            }
        }
    }
    let configs: Vec<RunConfig> = args
        .circuit
        .iter()
        .map(|c| RunConfig {
            circuit: c.clone(),
            coupling: args.coupling,
            tolerances,
            out: out_path(&args.out, c, batch),
            mode,
        })
        .collect();
    let exec = if args.sequential { ExecMode::Sequential } else { ExecMode::default() };

    let mut status = 0u8;
    for (cfg, result) in configs.iter().zip(run_batch(&configs, exec)) {
        match result {
            Ok(report) => {
                eprintln!("{}", summary(&cfg.circuit, &report));
                if cfg.out.is_none() {
                    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
                }
                if !report.pass {
                    status = status.max(1);
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", cfg.circuit.display());
                status = 2;
            }
        }
    }
    ExitCode::from(status)
}
