use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use discernlab_core::discern::{evaluate_relation_c_all_pairs, CertifyConfig};
use discernlab_core::{
    certify_weak_discernibility, hermitian_eigensystem, kron, pair_total_spin_squared, random_wavefunction,
    spin_operators, symmetrizer, Parity, ParticleSystem, Relation, Sector, SpinLabel,
};
use std::hint::black_box;

fn dense_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense");
    for two_s in [1u32, 3, 5] {
        let s = SpinLabel::from_doubled(two_s);
        let system = ParticleSystem::new(2, s.dim(), Sector::Full).unwrap();
        let k = pair_total_spin_squared(s, 1, 2, &system).unwrap();
        group.bench_with_input(BenchmarkId::new("pair_total_spin_squared", two_s), &s, |b, &s| {
            b.iter(|| pair_total_spin_squared(black_box(s), 1, 2, &system).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("eigensystem", two_s), &k, |b, k| {
            b.iter(|| hermitian_eigensystem(black_box(k), 1e-10).unwrap())
        });
    }
    let sx = spin_operators(SpinLabel::from_doubled(3)).x;
    group.bench_function("kron_4x4", |b| b.iter(|| kron(black_box(&sx), black_box(&sx)).unwrap()));
    for n in [3usize, 4] {
        let system = ParticleSystem::new(n, 3, Sector::Full).unwrap();
        group.bench_with_input(BenchmarkId::new("antisymmetrizer_d3", n), &system, |b, system| {
            b.iter(|| symmetrizer(black_box(system), Parity::Antisymmetric).unwrap())
        });
    }
    group.finish();
}

fn exact_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    for (n, two_s) in [(2usize, 0u32), (3, 1), (4, 3)] {
        let psi = random_wavefunction(n, 8, SpinLabel::from_doubled(two_s), 1).unwrap();
        group.bench_with_input(
            BenchmarkId::new("commutator_all_pairs", format!("N{n}_2s{two_s}")),
            &psi,
            |b, psi| b.iter(|| evaluate_relation_c_all_pairs(black_box(psi)).unwrap()),
        );
    }
    group.finish();
}

fn certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    let config = CertifyConfig {
        n_particles: 3,
        pure_samples: 200,
        mixed_samples: 40,
        max_degree: 4,
        ..CertifyConfig::default()
    };
    for relation in [Relation::T, Relation::C] {
        group.bench_function(relation.to_string(), |b| {
            b.iter(|| certify_weak_discernibility(relation, black_box(&config)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, dense_kernels, exact_kernels, certification);
criterion_main!(benches);
