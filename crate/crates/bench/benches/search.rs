use biplane_core::{search_symmetric_canonical, SearchConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    for k in [5, 6, 7] {
        let cfg = SearchConfig::new(k);
        g.bench_with_input(BenchmarkId::from_parameter(k), &cfg, |b, cfg| {
            b.iter(|| search_symmetric_canonical(cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
