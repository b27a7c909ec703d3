use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qftorus::{
    evaluate, limit_points, trace_ray, word, RayConfig, RenderConfig, Side, Slope, SlopeTrace,
    Viewport, C64,
};
use qftorus_bench::bent_group;

fn words(c: &mut Criterion) {
    let g = bent_group();
    let s = Slope::new(13, 21).unwrap();
    let w = word(s);
    c.bench_function("word 13/21", |b| b.iter(|| word(black_box(s))));
    c.bench_function("evaluate 13/21", |b| b.iter(|| evaluate(black_box(&w), &g)));
    let st = SlopeTrace::new(s, C64::new(2f64.ln(), 0.0)).unwrap();
    c.bench_function("trace jet 13/21", |b| {
        b.iter(|| st.jet(black_box(C64::new(0.1, 0.4))))
    });
}

fn rays(c: &mut Criterion) {
    let lambda = 2f64.ln();
    let cfg = RayConfig::for_lambda(lambda).unwrap();
    let s = Slope::new(2, 5).unwrap();
    c.bench_function("trace ray 2/5", |b| {
        b.iter(|| trace_ray(lambda, black_box(s), Side::Top, &cfg).unwrap())
    });
}

fn limit_sets(c: &mut Criterion) {
    let g = bent_group();
    let cfg = RenderConfig::new(
        12,
        1e-3,
        Viewport::new(-4.0, 4.0, -4.0, 4.0).unwrap(),
        512,
        512,
    )
    .unwrap();
    c.bench_function("limit points depth 12", |b| {
        b.iter(|| limit_points(black_box(&g), &cfg).unwrap())
    });
}

criterion_group!(benches, words, rays, limit_sets);
criterion_main!(benches);
