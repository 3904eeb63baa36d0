use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng as _;
use stodom::contact::{GraphSpec, GraphicalSheet};
use stodom::exec::{replicate_parallel, replicate_sequential, Rng};
use stodom::ising_lattice::{Boundary, IsingBox};
use stodom::lattice::{dominates_by_flow, product_measure, FiniteMeasure};

type Kernel = fn(usize, &mut Rng) -> f64;

fn contact_kernel(_: usize, rng: &mut Rng) -> f64 {
    let graph = GraphSpec::segment(40, 6.0, 0.5).unwrap();
    let sheet = GraphicalSheet::generate(&graph, 10.0, rng).unwrap();
    let init = vec![1u8; graph.len()];
    f64::from(u8::from(sheet.dies_out(&init, 1.0).unwrap()))
}

fn heat_bath_kernel(_: usize, rng: &mut Rng) -> f64 {
    let mut b = IsingBox::new(16, Boundary::Plus);
    for _ in 0..50 {
        b.sweep(0.4, rng);
    }
    b.magnetization()
}

fn flow_kernel(_: usize, rng: &mut Rng) -> f64 {
    let w: Vec<f64> = (0..1 << 8).map(|_| rng.random::<f64>() + 0.1).collect();
    let mu = FiniteMeasure::from_unnormalized(8, w).unwrap();
    f64::from(u8::from(dominates_by_flow(&mu, &product_measure(8, 0.3).unwrap()).unwrap()))
}

fn bench_replicas(c: &mut Criterion) {
    let kernels: [(&str, Kernel, usize); 3] =
        [("contact", contact_kernel, 64), ("heat_bath", heat_bath_kernel, 64), ("flow", flow_kernel, 64)];
    for (name, kernel, replicas) in kernels {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        group.bench_function(BenchmarkId::new("sequential", replicas), |b| {
            b.iter(|| black_box(replicate_sequential(replicas, 7, kernel)))
        });
        group.bench_function(BenchmarkId::new("parallel", replicas), |b| {
            b.iter(|| black_box(replicate_parallel(replicas, 7, kernel)))
        });
        group.finish();
    }
}

criterion_group!(benches, bench_replicas);
criterion_main!(benches);
