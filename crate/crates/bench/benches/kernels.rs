use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sphericity_bench::{cubic_metric, oval, spaces, warped_oval};
use sphericity_core::bounds::{verify_angle_bound, K0Mode};
use sphericity_core::curves::measure_radial;
use sphericity_core::layer::{incenter, layer_width};
use sphericity_core::spindles::{spindle_optimum, spindle_optimum_numeric};
use sphericity_core::warped::{verify_mu_comparison, verify_theorem2_on_warped};

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate");
    for (name, sp) in spaces() {
        g.bench_function(BenchmarkId::new("oval_4096", name), |b| b.iter(|| oval(&sp, 4096)));
    }
    g.finish();
}

fn angle(c: &mut Criterion) {
    let mut g = c.benchmark_group("angle");
    for (name, sp) in spaces() {
        let curve = oval(&sp, 4096);
        let o = incenter(&curve).expect("incenter").center;
        g.bench_function(BenchmarkId::new("measure_radial", name), |b| b.iter(|| measure_radial(&curve, &o)));
        g.bench_function(BenchmarkId::new("verify", name), |b| {
            b.iter(|| verify_angle_bound(&curve, &o, K0Mode::Measured, 1e-9))
        });
    }
    g.finish();
}

fn width(c: &mut Criterion) {
    let mut g = c.benchmark_group("width");
    g.sample_size(20);
    for (name, sp) in spaces() {
        let curve = oval(&sp, 4096);
        g.bench_function(BenchmarkId::new("incenter", name), |b| b.iter(|| incenter(&curve)));
        g.bench_function(BenchmarkId::new("layer_width", name), |b| b.iter(|| layer_width(&curve)));
    }
    g.finish();
}

fn spindles(c: &mut Criterion) {
    let mut g = c.benchmark_group("spindle_optimum");
    for (name, sp) in spaces() {
        g.bench_function(BenchmarkId::new("closed_form", name), |b| b.iter(|| spindle_optimum(&sp, 2.0)));
        g.bench_function(BenchmarkId::new("golden_section", name), |b| b.iter(|| spindle_optimum_numeric(&sp, 2.0)));
    }
    g.finish();
}

fn warped(c: &mut Criterion) {
    let metric = cubic_metric();
    let curve = warped_oval(&metric, 4096);
    let mut g = c.benchmark_group("warped");
    g.bench_function("mu_comparison", |b| b.iter(|| verify_mu_comparison(&metric, 1e-9)));
    g.bench_function("curve_4096", |b| b.iter(|| warped_oval(&metric, 4096)));
    g.bench_function("theorem_checks", |b| b.iter(|| verify_theorem2_on_warped(&curve, 1e-9)));
    g.finish();
}

criterion_group!(benches, generation, angle, width, spindles, warped);
criterion_main!(benches);
