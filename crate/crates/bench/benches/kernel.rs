use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use delta_bench::{expr, scope, CONTINUITY, MOMENTUM};
use delta_core::text::{parse_expr, render_poly};
use delta_core::{autoreduce, pseudo_reduce, Derivation, Ranking, ReductionMode};

fn arithmetic(c: &mut Criterion) {
    let m = expr(MOMENTUM);
    let d = expr(CONTINUITY);
    c.bench_function("poly_mul", |b| b.iter(|| black_box(&m) * black_box(&d)));
    c.bench_function("poly_differentiate", |b| {
        b.iter(|| black_box(&m).differentiate(Derivation::X).differentiate(Derivation::Y))
    });
}

fn reduction(c: &mut Criterion) {
    let r = Ranking::from_names(&["u", "v", "w", "p"]).unwrap();
    let f = expr(MOMENTUM).differentiate(Derivation::X);
    let g = expr(CONTINUITY);
    c.bench_function("pseudo_reduce_momentum_by_continuity", |b| {
        b.iter(|| pseudo_reduce(black_box(&f), black_box(&g), &r, ReductionMode::Full).unwrap())
    });
    let set = vec![
        expr(CONTINUITY),
        expr("u_t + p_x - nu*(u_xx + u_yy + u_zz)"),
        expr("v_t + p_y - nu*(v_xx + v_yy + v_zz)"),
        expr("w_t + p_z - nu*(w_xx + w_yy + w_zz)"),
    ];
    c.bench_function("autoreduce_stokes", |b| {
        b.iter(|| autoreduce(black_box(&set), &r).unwrap())
    });
}

fn text(c: &mut Criterion) {
    let s = scope();
    let r = Ranking::from_names(&["u", "v", "w", "p"]).unwrap();
    let p = expr(MOMENTUM);
    c.bench_function("parse_momentum", |b| {
        b.iter(|| parse_expr(black_box(MOMENTUM), &s).unwrap())
    });
    c.bench_function("render_momentum", |b| b.iter(|| render_poly(black_box(&p), &r)));
}

criterion_group!(benches, arithmetic, reduction, text);
criterion_main!(benches);
