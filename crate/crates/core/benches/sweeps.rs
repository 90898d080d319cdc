use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jacobi_core::classify::{main_theorem_report, Mode, ReportConfig};
use jacobi_core::derive::run_all_builtin;
use jacobi_core::sweep::{hopf_float_sweep, nonhopf_exclusion, Strategy};
use std::hint::black_box;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("nonhopf_exclusion_64");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(nonhopf_exclusion(7, 64, s)))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("hopf_float_sweep_1000");
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(hopf_float_sweep(7, 1000, s)))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("scripts");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(run_all_builtin(s)))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("exact_report");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        let cfg = ReportConfig {
            mode: Mode::Exact,
            strategy: s,
            ..ReportConfig::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| black_box(main_theorem_report(cfg).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
