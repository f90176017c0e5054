use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use landau_pacs::measure::{self, ProjectorQuadrature};
use landau_pacs::specfun::{laguerre_assoc, meijer_density};
use landau_pacs::{cavity, diagnostics, states, CavityParams, PhysicalScales, C64};
use landau_pacs_bench::{beta_grid, cutoffs, label};

fn special_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    g.bench_function("laguerre_n20_k2", |b| b.iter(|| laguerre_assoc(black_box(20), 2, black_box(-3.7))));
    for n in [1usize, 5] {
        g.bench_with_input(BenchmarkId::new("meijer_density", n), &n, |b, &n| {
            b.iter(|| meijer_density(n, black_box(0.8)).unwrap())
        });
    }
    g.finish();
}

fn constructors(c: &mut Criterion) {
    let mut g = c.benchmark_group("states");
    for n in [0usize, 2, 5] {
        let lab = label(n);
        let cut = cutoffs(n);
        g.bench_with_input(BenchmarkId::new("pacs_state", n), &n, |b, _| b.iter(|| states::pacs_state(&lab, cut).unwrap()));
        g.bench_with_input(BenchmarkId::new("photon_added_by_ladder", n), &n, |b, _| {
            b.iter(|| states::photon_added_by_ladder(&lab, cut).unwrap())
        });
    }
    g.finish();
}

fn figures(c: &mut Criterion) {
    let grid = beta_grid(200);
    let orders: Vec<usize> = (0..=5).collect();
    let mut g = c.benchmark_group("figures");
    g.bench_function("mandel_scan", |b| b.iter(|| diagnostics::mandel_scan(&orders, &grid)));
    g.bench_function("squeezing_scan", |b| {
        b.iter(|| diagnostics::squeezing_scan(&orders, &[0.0], &grid, &PhysicalScales::natural()))
    });
    g.sample_size(10);
    g.bench_function("density_scan", |b| b.iter(|| measure::density_scan(&orders, &grid).unwrap()));
    g.finish();
}

fn oracles(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracles");
    g.sample_size(10);
    let lab = label(3);
    let state = states::pacs_state(&lab, lab.cutoffs()).unwrap();
    g.bench_function("grid_covariance", |b| {
        b.iter(|| diagnostics::grid_covariance(&state, &PhysicalScales::natural()).unwrap())
    });
    g.bench_function("projector_n2", |b| {
        b.iter(|| measure::reconstruct_projector(2, C64::new(0.5, 0.0), &ProjectorQuadrature::default(), 12).unwrap())
    });
    let p = CavityParams::new(20.0, 1.0, 0.5, 0.5, 1.0, 1.0).unwrap();
    g.bench_function("effective_evolve", |b| b.iter(|| cavity::effective_evolve(&p, p.cutoffs()).unwrap()));
    let beta = C64::new(1.0, 0.0);
    let alpha = C64::new(0.5, 0.0);
    let cut = landau_pacs::Cutoffs::for_parameters(1.0, 0.5, 2);
    g.bench_function("photon_addition", |b| b.iter(|| cavity::photon_addition(beta, alpha, 1.0, 0.05, cut).unwrap()));
    g.finish();
}

criterion_group!(benches, special_functions, constructors, figures, oracles);
criterion_main!(benches);
