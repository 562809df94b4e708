//! Criterion benches for the data-parallel stages, comparing the rayon path
//! against the sequential fallback. Build with `--no-default-features` to
//! measure the fully sequential crate.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flip_graphs::audit::strong_convexity_exhaustive;
use flip_graphs::constructions::{build_family8, InnerChoice};
use flip_graphs::engine::{diameter, reachable_set, ExecMode, SearchLimits};
use flip_graphs::geometry::shapes::{any_triangulation, convex_polygon};
use flip_graphs::heuristics::{greedy_path, TieRule};

fn modes() -> Vec<(&'static str, ExecMode)> {
    let mut v = vec![("sequential", ExecMode::Sequential)];
    if cfg!(feature = "parallel") {
        v.push(("parallel", ExecMode::Parallel));
    }
    v
}

fn bench_diameter(c: &mut Criterion) {
    let cfg = convex_polygon(10);
    let limits = SearchLimits::states(100_000);
    let mut group = c.benchmark_group("diameter_10gon");
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| diameter(&cfg, limits, mode).unwrap())
        });
    }
    group.finish();
}

fn bench_convexity_audit(c: &mut Criterion) {
    let cfg = convex_polygon(8);
    let limits = SearchLimits::states(100_000);
    let mut group = c.benchmark_group("convexity_audit_8gon");
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| {
                let v = strong_convexity_exhaustive(&cfg, None, limits, mode).unwrap();
                assert!(v.is_empty());
            })
        });
    }
    group.finish();
}

fn bench_enumeration(c: &mut Criterion) {
    let cfg = convex_polygon(11);
    let start = any_triangulation(&cfg);
    c.bench_function("enumerate_11gon", |b| {
        b.iter(|| {
            reachable_set(&cfg, &start, None, SearchLimits::states(100_000))
                .unwrap()
                .count()
        })
    });
}

fn bench_greedy_sweep(c: &mut Criterion) {
    let inst = build_family8(38, 2, InnerChoice::Comb, InnerChoice::Comb).unwrap();
    c.bench_function("greedy_sweep_m2", |b| {
        b.iter(|| {
            greedy_path(&inst.config, &inst.t_minus, &inst.t_plus, TieRule::LexRemovedArc)
                .unwrap()
                .len()
        })
    });
}

criterion_group!(
    benches,
    bench_diameter,
    bench_convexity_audit,
    bench_enumeration,
    bench_greedy_sweep
);
criterion_main!(benches);
