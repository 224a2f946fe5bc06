use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use graphcat::exec::Exec;
use graphcat::graph::generate::Bounds;
use graphcat::maps::Cat;
use graphcat::operad::parity_modular;
use graphcat::oracle::factorization_check;
use graphcat::presheaf::{is_segal, nerve, Site};

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn site_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("site_build_u0");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| Site::build_with(Cat::U0, Bounds::default(), exec).unwrap())
        });
    }
    g.finish();
}

fn factorization(c: &mut Criterion) {
    let site = Site::build_with(Cat::UCyc, Bounds::default(), Exec::default()).unwrap();
    let mut g = c.benchmark_group("factorization_ucyc");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| factorization_check(&site, exec).unwrap()));
    }
    g.finish();
}

fn nerve_segal(c: &mut Criterion) {
    let site = Arc::new(Site::build_with(Cat::U, Bounds::default(), Exec::default()).unwrap());
    let p = parity_modular(5);
    let mut g = c.benchmark_group("nerve_segal_u");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let x = nerve(&p, &site, exec).unwrap();
                is_segal(&x, exec).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, site_build, factorization, nerve_segal);
criterion_main!(benches);
