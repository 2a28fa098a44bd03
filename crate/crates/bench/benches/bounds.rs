use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use packbound_core::euclid::{ball_autocorrelation, lp_certificate_report, radial_fourier};
use packbound_core::lasserre::las_prime;
use packbound_core::sdp::{self, SdpProblem};
use packbound_core::theta::{theta_primal, ThetaVariant};
use packbound_core::{cov, cube_mesh, pack, Config, Graph};

fn theta_on_cycles(c: &mut Criterion) {
    let cfg = Config::default();
    let mut group = c.benchmark_group("theta_cycle");
    for n in [5, 11, 21, 41] {
        let g = Graph::cycle(n);
        for v in ThetaVariant::ALL {
            group.bench_with_input(BenchmarkId::new(v.name(), n), &g, |b, g| {
                b.iter(|| theta_primal(black_box(g), v, &cfg).unwrap().value)
            });
        }
    }
    group.finish();
}

fn theta_prime_on_line_meshes(c: &mut Criterion) {
    let cfg = Config::default();
    let mut group = c.benchmark_group("theta_prime_mesh_1d");
    group.sample_size(10);
    for r in [5.0, 10.0, 20.0] {
        let g = cube_mesh(1, r, 0.25).unwrap().conflict_graph();
        group.bench_with_input(BenchmarkId::from_parameter(r), &g, |b, g| {
            b.iter(|| theta_primal(black_box(g), ThetaVariant::ThetaPrime, &cfg).unwrap().value)
        });
    }
    group.finish();
}

fn lasserre_levels(c: &mut Criterion) {
    let cfg = Config::default();
    let mut group = c.benchmark_group("las_prime_cycle7");
    group.sample_size(10);
    let g = Graph::cycle(7);
    for t in 1..=3 {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| b.iter(|| las_prime(black_box(&g), t, &cfg).unwrap().value));
    }
    group.finish();
}

fn exact_bounds(c: &mut Criterion) {
    let cfg = Config::default();
    let square = cube_mesh(2, 2.5, 0.5).unwrap();
    c.bench_function("pack_square_mesh", |b| b.iter(|| pack(black_box(&square), &cfg.caps).unwrap()));
    let line = cube_mesh(1, 20.0, 0.25).unwrap();
    c.bench_function("cov_line_mesh", |b| b.iter(|| cov(black_box(&line), &cfg.caps).unwrap()));
}

fn radial_transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("radial_fourier_ball_autocorr");
    for n in 1..=4 {
        let f = ball_autocorrelation(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| b.iter(|| radial_fourier(f, black_box(3.7)).unwrap()));
    }
    group.finish();
    let f = ball_autocorrelation(3).unwrap();
    let mut group = c.benchmark_group("lp_certificate");
    group.sample_size(10);
    group.bench_function("ball_autocorr_3", |b| b.iter(|| lp_certificate_report(black_box(&f), ThetaVariant::Theta).unwrap().ratio));
    group.finish();
}

fn empty_solve(c: &mut Criterion) {
    let p = SdpProblem::new(vec![]);
    c.bench_function("sdp_empty_problem", |b| b.iter(|| sdp::solve(black_box(&p), &Default::default()).unwrap().iterations));
}

criterion_group!(benches, theta_on_cycles, theta_prime_on_line_meshes, lasserre_levels, exact_bounds, radial_transforms, empty_solve);
criterion_main!(benches);
