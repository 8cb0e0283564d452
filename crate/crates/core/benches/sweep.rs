use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use poncelet_core::lab::FamilySweep;
use poncelet_core::{AffineMap, ConcentricPair, Execution};
use std::hint::black_box;

fn bench_family_sweep(c: &mut Criterion) {
    let base = ConcentricPair::incircle(1.5, 1.0).unwrap();
    let pairs = [
        ("incircle", base.clone()),
        ("confocal", ConcentricPair::confocal(1.5, 1.0).unwrap()),
        (
            "sheared",
            ConcentricPair::affine_image(&base, &AffineMap::shear(0.5)).unwrap(),
        ),
    ];
    let mut group = c.benchmark_group("family_sweep");
    for (name, pair) in &pairs {
        for n in [360usize, 3600] {
            for (mode, exec) in [
                ("sequential", Execution::Sequential),
                ("parallel", Execution::Parallel),
            ] {
                group.bench_with_input(
                    BenchmarkId::new(format!("{name}/{mode}"), n),
                    &n,
                    |b, &n| b.iter(|| FamilySweep::run_with(black_box(pair), n, exec)),
                );
            }
        }
    }
    group.finish();
}

fn bench_orbits_only(c: &mut Criterion) {
    let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
    let mut group = c.benchmark_group("orbit_sweep");
    for (mode, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_function(mode, |b| b.iter(|| pair.sweep_with(black_box(3600), exec)));
    }
    group.finish();
}

criterion_group!(benches, bench_family_sweep, bench_orbits_only);
criterion_main!(benches);
