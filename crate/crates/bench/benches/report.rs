use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nilsys_bench::algebras;
use nilsys_core::algebra::{k_c, solid_flag, FlagMode};
use nilsys_core::bounds::{bound_report, BoundsConfig};

fn report(c: &mut Criterion) {
    let mut group = c.benchmark_group("report");
    group.sample_size(10);
    let config = BoundsConfig::default();
    for (name, a) in algebras() {
        group.bench_function(format!("solid_flag/{name}"), |b| b.iter(|| solid_flag(black_box(&a), FlagMode::Auto)));
        group.bench_function(format!("k_c/{name}"), |b| b.iter(|| k_c(black_box(&a))));
        group.bench_function(format!("bound_report/{name}"), |b| b.iter(|| bound_report(black_box(&a), &config)));
    }
    group.finish();
}

criterion_group!(benches, report);
criterion_main!(benches);
