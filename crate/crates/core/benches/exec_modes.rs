// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Sequential versus rayon execution of the data-parallel kernels.
//! Build with `--no-default-features` to see the fallback alone.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fermifock_core::compiler::compile_batch;
use fermifock_core::fock::ladder_matrix_with;
use fermifock_core::hamiltonian::assemble_with;
use fermifock_core::random::{self, random_circuit, random_hamiltonian_spec};
use fermifock_core::report::{evaluate, Mode, Tolerances};
use fermifock_core::{Complex64, ExecMode, FixedInteraction, FockVector, LadderKind, LevelIndex, ThetaEncoding};
use rand::Rng;

fn modes() -> Vec<ExecMode> {
    if cfg!(feature = "parallel") {
        vec![ExecMode::Sequential, ExecMode::Parallel]
    } else {
        vec![ExecMode::Sequential]
    }
}

fn label(mode: ExecMode) -> &'static str {
    match mode {
        ExecMode::Sequential => "sequential",
        ExecMode::Parallel => "parallel",
    }
}

fn operator_kernels(c: &mut Criterion) {
    let mut rng = random::rng(1);
    for levels in [10, 12] {
        let spec = random_hamiltonian_spec(&mut rng, 4).unwrap();
        // widen a small spec so the operator is dense in a 4-level block only
        let mut wide = fermifock_core::HamiltonianSpec::new(levels).unwrap();
        for (i, &a) in spec.alpha().iter().enumerate() {
            wide.add_alpha(i, a).unwrap();
        }
        for (&(i, j), &g) in spec.gamma() {
            wide.add_gamma(i, j, g).unwrap();
        }
        let h = assemble_with(&wide, ExecMode::Sequential).unwrap();
        let amps: Vec<Complex64> = (0..1 << levels)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let v = FockVector::from_amplitudes(levels, amps).unwrap();

        let mut group = c.benchmark_group(format!("apply_J{levels}"));
        group.sample_size(10);
        for mode in modes() {
            group.bench_function(BenchmarkId::from_parameter(label(mode)), |b| {
                b.iter(|| black_box(h.apply_with(&v, mode).unwrap()))
            });
        }
        group.finish();

        let mut group = c.benchmark_group(format!("ladder_matrix_J{levels}"));
        group.sample_size(10);
        for mode in modes() {
            group.bench_function(BenchmarkId::from_parameter(label(mode)), |b| {
                b.iter(|| black_box(ladder_matrix_with(LadderKind::Create, LevelIndex(levels / 2), levels, mode).unwrap()))
            });
        }
        group.finish();
    }

    let spec = random_hamiltonian_spec(&mut rng, 9).unwrap();
    let a = assemble_with(&spec, ExecMode::Sequential).unwrap();
    let mut group = c.benchmark_group("mul_J9");
    group.sample_size(10);
    for mode in modes() {
        group.bench_function(BenchmarkId::from_parameter(label(mode)), |b| {
            b.iter(|| black_box(a.mul_with(&a, mode).unwrap()))
        });
    }
    group.finish();
}

fn circuit_batches(c: &mut Criterion) {
    let circuits: Vec<_> = (0..16).map(|s| random_circuit(3, 6, s).unwrap()).collect();
    let enc = ThetaEncoding::canonical(3).unwrap();
    let fixed = FixedInteraction::nearest_neighbor(&enc, 1.0).unwrap();

    let mut group = c.benchmark_group("compile_batch_16x3q");
    for mode in modes() {
        group.bench_function(BenchmarkId::from_parameter(label(mode)), |b| {
            b.iter(|| black_box(compile_batch(&circuits, &fixed, &enc, mode)))
        });
    }
    group.finish();

    let deep = random_circuit(5, 40, 3).unwrap();
    let mut group = c.benchmark_group("verify_diagrams_5q_40g");
    group.sample_size(10);
    for mode in modes() {
        group.bench_function(BenchmarkId::from_parameter(label(mode)), |b| {
            b.iter(|| black_box(evaluate(&deep, 1.0, Mode::VerifyDiagrams, Tolerances::default(), mode).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, operator_kernels, circuit_batches);
criterion_main!(benches);
