//! Sequential and rayon paths on the two data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dac_core::exact::{pivotality_poly, Caps};
use dac_core::graph::complete_bipartite_dk;
use dac_core::mc::crossing_thresholds;
use dac_core::{Exec, LatticeBox, SiteMode};

fn enumeration(c: &mut Criterion) {
    let g = complete_bipartite_dk(6).unwrap();
    let mut group = c.benchmark_group("pivotality_poly D^6");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let caps = Caps::with_exec(exec);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &caps, |b, caps| {
            b.iter(|| pivotality_poly(&g, caps).unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let lattice = LatticeBox::crossing_box(16, SiteMode::NearestNeighbor).unwrap();
    let mut group = c.benchmark_group("crossing thresholds L=16, 4096 samples");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| crossing_thresholds(&lattice, 0.2, 4096, 1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, sampling);
criterion_main!(benches);
