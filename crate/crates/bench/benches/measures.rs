use criterion::{criterion_group, criterion_main, Criterion};
use entshare::channels;
use entshare::linalg;
use entshare::measures::{self, FefOptions};
use entshare::omega::{self, OmegaParams};
use entshare::random::{self, rng_for};
use std::hint::black_box;

fn spectral(c: &mut Criterion) {
    let rho = random::random_mixed_state(6, &mut rng_for(0, 0));
    c.bench_function("eigvalsh d=6", |b| b.iter(|| linalg::eigvalsh(black_box(rho.matrix()))));
    c.bench_function("negativity d=6", |b| b.iter(|| measures::negativity(black_box(&rho))));
    let ch = random::random_dilation_channel(6, &mut rng_for(0, 1));
    c.bench_function("dual top eigenpair d=6", |b| {
        b.iter(|| channels::top_choi_eigenpair(&black_box(&ch).dual()).unwrap())
    });
}

fn fef(c: &mut Criterion) {
    let rho = random::random_mixed_state(4, &mut rng_for(0, 2));
    let opts = FefOptions::default();
    c.bench_function("fef d=4, 32 restarts", |b| {
        b.iter(|| measures::fef(black_box(&rho), &opts).unwrap())
    });
}

fn certificate(c: &mut Criterion) {
    let p = OmegaParams::new(5, vec![0.15, 0.35, 0.6, 0.85]).unwrap();
    let opts = FefOptions::default();
    let mut group = c.benchmark_group("certificate");
    group.sample_size(20);
    group.bench_function("d=5", |b| b.iter(|| omega::theorem1_certificate(black_box(&p), &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, spectral, fef, certificate);
criterion_main!(benches);
