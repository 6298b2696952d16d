use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gaussmap_core::calculus::SurfaceGrid;
use gaussmap_core::exec::Exec;
use gaussmap_core::surface::{catalog, Domain, Params};
use gaussmap_core::verify::{ruh_vilms_residual, CheckOptions};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn jets(c: &mut Criterion) {
    let s = catalog("geodesic-sphere-h3", &Params::new()).unwrap();
    let mut g = c.benchmark_group("jets");
    for n in [64usize, 128] {
        let domain = Domain { nu: n, nv: n, ..s.domain };
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &domain, |b, d| {
                b.iter(|| SurfaceGrid::new(black_box(&s), *d, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn ruh_vilms(c: &mut Criterion) {
    let s = catalog("clifford-torus", &Params::new()).unwrap();
    let mut g = c.benchmark_group("ruh_vilms_64_richardson");
    g.sample_size(20);
    for (name, exec) in MODES {
        let opts = CheckOptions {
            grid: Some((64, 64)),
            exec,
            ..Default::default()
        };
        g.bench_function(name, |b| b.iter(|| ruh_vilms_residual(black_box(&s), &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, jets, ruh_vilms);
criterion_main!(benches);
