use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orthologic::catalog;
use orthologic::checks::{
    check_distributive, check_modular, check_orthomodular, full_report, CheckOptions,
};
use orthologic::hilbert::{default_spin_half_assignment, verify_embedding, DEFAULT_TOLERANCE};
use orthologic::model::proposition_lattice;
use rand::rngs::StdRng;
use rand::SeedableRng;

criterion_group!(benches, build, checkers, embedding);
criterion_main!(benches);

fn build(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let model = catalog::random_model(&mut rng, 5..=5, 4..=4);
    c.bench_function("compile 5x4 model", |b| {
        b.iter(|| proposition_lattice(&model).unwrap())
    });
    c.bench_function("boolean 6 cube", |b| b.iter(|| catalog::boolean(6)));
}

fn checkers(c: &mut Criterion) {
    let opts = CheckOptions::default();
    let mut group = c.benchmark_group("checkers");
    for experiments in [2, 3, 5] {
        let mut rng = StdRng::seed_from_u64(experiments as u64);
        let model = catalog::random_model(&mut rng, experiments..=experiments, 4..=4);
        let l = proposition_lattice(&model).unwrap();
        l.is_lattice();
        group.bench_with_input(BenchmarkId::new("orthomodular", l.len()), &l, |b, l| {
            b.iter(|| check_orthomodular(l, &opts))
        });
        group.bench_with_input(BenchmarkId::new("modular", l.len()), &l, |b, l| {
            b.iter(|| check_modular(l, &opts))
        });
        group.bench_with_input(BenchmarkId::new("distributive", l.len()), &l, |b, l| {
            b.iter(|| check_distributive(l, &opts))
        });
    }
    let spin = catalog::spin_half_lattice();
    group.bench_function("full report spin-half", |b| {
        b.iter(|| full_report(&spin, &opts))
    });
    group.finish();
}

fn embedding(c: &mut Criterion) {
    let l = catalog::spin_half_lattice();
    let a = default_spin_half_assignment();
    c.bench_function("embed spin-half", |b| {
        b.iter(|| verify_embedding(&l, &a, DEFAULT_TOLERANCE).unwrap())
    });
}
