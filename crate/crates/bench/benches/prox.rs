use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use proxgrad::prox::{BoxIndicator, LpHalf, ProxOracle, SphereIndicator, L0, L1};
use proxgrad::Vector;

const DIM: usize = 1024;

fn input() -> Vector {
    Vector::new(
        (0..DIM)
            .map(|i| ((i * 37 % 101) as f64 - 50.0) / 10.0)
            .collect(),
    )
    .unwrap()
}

fn prox(c: &mut Criterion) {
    let oracles: Vec<Box<dyn ProxOracle>> = vec![
        Box::new(L1::new(0.5).unwrap()),
        Box::new(L0::new(0.5).unwrap()),
        Box::new(LpHalf::new(0.5).unwrap()),
        Box::new(BoxIndicator::symmetric(DIM, 1.0).unwrap()),
        Box::new(SphereIndicator::new(1.0).unwrap()),
    ];
    let v = input();
    let mut group = c.benchmark_group("prox");
    group.throughput(Throughput::Elements(DIM as u64));
    for phi in &oracles {
        group.bench_with_input(BenchmarkId::from_parameter(phi.name()), &v, |b, v| {
            b.iter(|| phi.prox(black_box(2.0), black_box(v)))
        });
    }
    group.finish();
}

criterion_group!(benches, prox);
criterion_main!(benches);
