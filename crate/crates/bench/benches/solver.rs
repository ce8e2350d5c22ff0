use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use proxgrad::registry::{self, RunConfig};
use proxgrad::solve;

fn shipped(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for name in registry::preset_names() {
        let base = RunConfig::from_json(registry::preset(name).unwrap()).unwrap();
        for m in [0usize, 5] {
            let mut cfg = base.clone();
            cfg.solver.m = m;
            let run = cfg.prepare().unwrap();
            group.bench_function(BenchmarkId::new(name, format!("m{m}")), |b| {
                b.iter(|| solve(&run.problem, black_box(&run.config), black_box(&run.x0)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, shipped);
criterion_main!(benches);
