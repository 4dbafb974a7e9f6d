//! Timings for the hot paths: series products, brackets, graph
//! enumeration, the twisted Taylor coefficient and Monte-Carlo weights.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hkr_core::formality::twisted_first_taylor;
use hkr_core::graph::{classify_wheels, enumerate_graphs};
use hkr_core::polydiff::bullet;
use hkr_core::polyvector::PolyVectorField;
use hkr_core::random;
use hkr_core::verify::reference_omega;
use hkr_core::weight::{mc_weight, MonteCarloConfig};

fn algebra(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random::series(&mut rng, 3, 8, 4, 12);
    let g = random::series(&mut rng, 3, 8, 4, 12);
    c.bench_function("series_mul_d3_cap8", |b| b.iter(|| black_box(&f).checked_mul(black_box(&g)).unwrap()));

    let x = random::poly_vector(&mut rng, 3, 6, 2, 3);
    let y = random::poly_vector(&mut rng, 3, 6, 2, 3);
    c.bench_function("schouten_bivectors_d3", |b| b.iter(|| black_box(&x).schouten(black_box(&y)).unwrap()));

    let p = random::polydiff(&mut rng, 2, 6, 1, 2, 6);
    let q = random::polydiff(&mut rng, 2, 6, 1, 2, 6);
    c.bench_function("bullet_bidifferential_d2", |b| b.iter(|| bullet(black_box(&p), black_box(&q)).unwrap()));
}

fn graphs(c: &mut Criterion) {
    c.bench_function("enumerate_n2_m2", |b| b.iter(|| enumerate_graphs(black_box(2), 2, 0).unwrap()));
    c.bench_function("classify_wheels_j3_p3", |b| b.iter(|| classify_wheels(black_box(3), 3).unwrap()));
}

fn formality(c: &mut Criterion) {
    let omega = reference_omega(6).unwrap();
    let gamma = PolyVectorField::basis(3, 6, &[0, 1, 2]).unwrap();
    c.bench_function("twisted_first_taylor_reference", |b| {
        b.iter(|| twisted_first_taylor(black_box(&omega), black_box(&gamma), 2).unwrap())
    });
}

fn weights(c: &mut Criterion) {
    let wheel = classify_wheels(2, 1).unwrap()[0].representative();
    let cfg = MonteCarloConfig {
        samples: 50_000,
        seed: 1,
        workers: 1,
    };
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    group.bench_function("wheel2_50k", |b| b.iter(|| mc_weight(black_box(&wheel), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, algebra, graphs, formality, weights);
criterion_main!(benches);
