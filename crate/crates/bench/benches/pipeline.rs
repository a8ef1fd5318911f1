use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topocluster::montecarlo::{
    default_protected, run_sweep, IntervalKind, LatticeSpec, NoiseSpec, ProtectedSpec,
};
use topocluster::witness::{witness_value, witness_via_decomposition};
use topocluster::{
    build_elementary_cell, build_l8, build_periodic_cubic, Decoder, DecoderKind, ErrorPattern,
    InteractionGraph, PauliOp, StateVector, SweepConfig,
};

fn decoding(c: &mut Criterion) {
    let lattice = build_periodic_cubic(5, 5, 5).unwrap();
    let protected = default_protected(&lattice);
    let d = Decoder::new(lattice, DecoderKind::Mwpm, protected).unwrap();
    let n = d.graph().len();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("periodic_5x5x5");
    group.bench_function("syndrome", |b| {
        b.iter_batched(
            || ErrorPattern::new((0..n).filter(|_| rng.random_bool(0.02))),
            |e| black_box(d.syndrome(&e).unwrap()),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("mwpm_trial_p0.02", |b| {
        b.iter_batched(
            || ErrorPattern::new((0..n).filter(|_| rng.random_bool(0.02))),
            |e| black_box(d.trial(&e).unwrap()),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn dense_states(c: &mut Criterion) {
    let g8 = InteractionGraph::from_complex(&build_l8());
    let cell = InteractionGraph::from_complex(&build_elementary_cell());
    let big = StateVector::prepare_graph_state(&cell).unwrap();
    let op = PauliOp::x_on(18, 0..6);
    let psi = StateVector::prepare_lab_state();
    let mut group = c.benchmark_group("statevector");
    group.bench_function("prepare_g8", |b| {
        b.iter(|| black_box(StateVector::prepare_graph_state(&g8).unwrap()))
    });
    group.bench_function("prepare_elementary_18q", |b| {
        b.iter(|| black_box(StateVector::prepare_graph_state(&cell).unwrap()))
    });
    group.bench_function("pauli_expectation_18q", |b| {
        b.iter(|| black_box(big.expectation_pauli(&op).unwrap()))
    });
    group.bench_function("witness_value", |b| {
        b.iter(|| black_box(witness_value(&psi).unwrap()))
    });
    group.bench_function("witness_decomposition", |b| {
        b.iter(|| black_box(witness_via_decomposition(&psi).unwrap()))
    });
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let cfg = SweepConfig {
        lattice: LatticeSpec::L8,
        protected: ProtectedSpec::Default,
        decoder: DecoderKind::LookupL8,
        p_grid: vec![0.1, 0.3, 0.5],
        trials: 10_000,
        seed: 42,
        noise: NoiseSpec::default(),
        interval: IntervalKind::Normal,
    };
    c.bench_function("l8_sweep_3x10k", |b| {
        b.iter(|| black_box(run_sweep(&cfg).unwrap()))
    });
}

criterion_group!(benches, decoding, dense_states, sweeps);
criterion_main!(benches);
