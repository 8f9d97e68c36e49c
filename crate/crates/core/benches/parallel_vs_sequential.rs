use std::hint::black_box;

use ccz_core::analysis::{error_scaling_sweep, extract_gate_with, SweepRatio};
use ccz_core::dynamics::EvolutionMode;
use ccz_core::protocol::ProtocolConfig;
use ccz_core::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const STRATEGIES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn extraction(c: &mut Criterion) {
    let cfg = ProtocolConfig::reference()
        .with_mode(EvolutionMode::Simultaneous)
        .unwrap();
    let mut group = c.benchmark_group("extract_gate_simultaneous");
    group.sample_size(20);
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| extract_gate_with(black_box(&cfg), exec).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let template = ProtocolConfig::reference();
    let ratios = [5.0, 10.0, 20.0, 40.0, 80.0, 160.0, 320.0, 640.0].map(SweepRatio::Finite);
    let mut group = c.benchmark_group("error_scaling_sweep_8_ratios");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| error_scaling_sweep(black_box(&template), &ratios, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, extraction, sweep);
criterion_main!(benches);
