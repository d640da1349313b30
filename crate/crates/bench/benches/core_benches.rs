use criterion::{black_box, criterion_group, criterion_main, Criterion};

use xld_core::kvol::{s_x_direct, ValuationModel};
use xld_core::lattice::{count_by_phi, enumerate, LatticeCtx};
use xld_core::stability::family_polystable;
use xld_core::{ih, lattice};

fn bench_ih_series(c: &mut Criterion) {
    c.bench_function("ih_series_3_4", |b| {
        b.iter(|| ih::ih_series(black_box(3), black_box(4)).unwrap())
    });
    c.bench_function("ih_oracle_3_4", |b| {
        b.iter(|| ih::ih_oracle(black_box(3), black_box(4)).unwrap())
    });
}

fn bench_vt_oracle(c: &mut Criterion) {
    c.bench_function("vt_prim_dims_oracle_5555", |b| {
        b.iter(|| ih::vt_prim_dims_oracle(black_box(&[5, 5, 5, 5])).unwrap())
    });
}

fn bench_lattice(c: &mut Criterion) {
    let ctx = LatticeCtx::new(2, 3).unwrap();
    c.bench_function("enumerate_2_3_deg_8", |b| {
        b.iter(|| enumerate(black_box(ctx), black_box(8)).unwrap())
    });
    c.bench_function("count_by_phi_2_3_n_20", |b| {
        b.iter(|| count_by_phi(black_box(ctx), black_box(20)).unwrap())
    });
    c.bench_function("hilbert_crosscheck_2_3_deg_10", |b| {
        b.iter(|| lattice::hilbert_crosscheck(black_box(ctx), black_box(10)).unwrap())
    });
}

fn bench_stability(c: &mut Criterion) {
    c.bench_function("family_polystable_3_3_2", |b| {
        b.iter(|| family_polystable(black_box(3), black_box(3), black_box(2)).unwrap())
    });
}

fn bench_kvol(c: &mut Criterion) {
    let model = ValuationModel::point_blowup(2);
    c.bench_function("s_x_direct_4_3_point_blowup", |b| {
        b.iter(|| s_x_direct(black_box(4), black_box(3), black_box(&model)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_ih_series,
    bench_vt_oracle,
    bench_lattice,
    bench_stability,
    bench_kvol
);
criterion_main!(benches);
