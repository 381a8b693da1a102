//! Criterion benchmarks for the numeric kernels and the construction /
//! verification pipeline.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use num_complex::Complex64;

use ghz_nonlocal::constructions::{delta, eta, stopper_search, thm1_set};
use ghz_nonlocal::group::Bipartition;
use ghz_nonlocal::sdp::{solve_ppt, DiscriminationInstance, SdpParams};
use ghz_nonlocal::states::{canonical_state, Provenance, StateSet};
use ghz_nonlocal::tensor::{
    hermitian_eig, partial_transpose, BipartiteShape, ComplexMatrix, Side,
};
use ghz_nonlocal::verifier::{genuine_nonlocality_report, reduce_to_bipartite};

fn deterministic_hermitian(n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| {
        let x = ((i * 31 + j * 17) % 97) as f64 / 97.0 - 0.5;
        let y = ((i * 13 + j * 41) % 89) as f64 / 89.0 - 0.5;
        Complex64::new(x, y)
    });
    m.hermitianize();
    m
}

fn bench_eig(c: &mut Criterion) {
    let small = deterministic_hermitian(40);
    c.bench_function("hermitian_eig_40_jacobi", |b| {
        b.iter(|| hermitian_eig(black_box(&small)).unwrap())
    });
    let large = deterministic_hermitian(150);
    c.bench_function("hermitian_eig_150_ql", |b| {
        b.iter(|| hermitian_eig(black_box(&large)).unwrap())
    });
}

fn bench_partial_transpose(c: &mut Criterion) {
    let shape = BipartiteShape::new(19, 19).unwrap();
    let m = deterministic_hermitian(shape.side());
    c.bench_function("partial_transpose_361", |b| {
        b.iter(|| partial_transpose(black_box(&m), shape, Side::A).unwrap())
    });
}

fn bench_reduce_and_verify(c: &mut Criterion) {
    let eta_set = eta().unwrap();
    let ab_c = Bipartition::from_parties(3, &[3]).unwrap();
    c.bench_function("reduce_eta_ab_c", |b| {
        b.iter(|| reduce_to_bipartite(black_box(&eta_set), &ab_c).unwrap())
    });

    let delta_set = delta().unwrap();
    c.bench_function("report_delta_7_bipartitions", |b| {
        b.iter_batched(
            || delta_set.clone(),
            |set| genuine_nonlocality_report(&set).unwrap(),
            BatchSize::SmallInput,
        )
    });

    let big = thm1_set(8, 4, None).unwrap();
    c.bench_function("report_thm1_8_4", |b| {
        b.iter_batched(
            || big.clone(),
            |set| genuine_nonlocality_report(&set).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_stopper_search(c: &mut Criterion) {
    c.bench_function("stopper_search_4_3", |b| {
        b.iter(|| stopper_search(black_box(4), 3, 1, 1_000_000).unwrap())
    });
}

fn bench_sdp(c: &mut Criterion) {
    let states = vec![
        canonical_state(2, 2, 1, &[0]).unwrap(),
        canonical_state(2, 2, 2, &[0]).unwrap(),
        canonical_state(2, 2, 1, &[1]).unwrap(),
    ];
    let set = StateSet::new(2, 2, states, Provenance::new("bell", serde_json::json!({}))).unwrap();
    let b = Bipartition::from_parties(2, &[2]).unwrap();
    let inst = reduce_to_bipartite(&set, &b).unwrap();
    let di = DiscriminationInstance::from_bipartite(&inst).unwrap();
    let mut group = c.benchmark_group("sdp");
    group.sample_size(10);
    group.bench_function("solve_ppt_three_bell", |b| {
        b.iter(|| solve_ppt(black_box(&di), &SdpParams::default()).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_eig,
    bench_partial_transpose,
    bench_reduce_and_verify,
    bench_stopper_search,
    bench_sdp
);
criterion_main!(benches);
