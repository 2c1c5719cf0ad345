use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paraflux::field::forward_transform;
use paraflux::paraproduct::{verify_supports, SUPPORT_TOL};
use paraflux::{decompose_product, min_gap, Exponent, Field, SpaceSpec};
use paraflux_bench::bank;

const SIZES: [usize; 3] = [128, 256, 512];

fn fft(c: &mut Criterion) {
    let mut group = c.benchmark_group("fft");
    for size in SIZES {
        let (sys, fields) = bank(size);
        let f = &fields[5];
        group.bench_with_input(BenchmarkId::from_parameter(size), &size, |b, _| {
            b.iter(|| forward_transform(sys.grid(), black_box(f.physical())))
        });
    }
    group.finish();
}

fn decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for size in SIZES {
        let (sys, fields) = bank(size);
        group.bench_with_input(BenchmarkId::from_parameter(size), &fields[5], |b, f| {
            b.iter(|| sys.decompose(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn norms(c: &mut Criterion) {
    let e = |v: f64| Exponent::new(v).unwrap();
    let besov = SpaceSpec::besov(1.0, e(2.0), Exponent::INFINITY);
    let triebel = SpaceSpec::triebel(1.0, e(1.0), e(2.0)).unwrap();
    let mut group = c.benchmark_group("norms");
    for size in SIZES {
        let (sys, fields) = bank(size);
        let bands = sys.decompose(&fields[5]).unwrap();
        group.bench_with_input(BenchmarkId::new("besov", size), &bands, |b, bands| {
            b.iter(|| besov.norm_of_bands(black_box(bands)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("triebel", size), &bands, |b, bands| {
            b.iter(|| triebel.norm_of_bands(black_box(bands)).unwrap())
        });
    }
    group.finish();
}

fn paraproduct(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose_product");
    group.sample_size(20);
    for size in [128, 256] {
        let (sys, fields) = bank(size);
        for m in [2usize, 3] {
            let factors: Vec<Field> = fields[3..3 + m].to_vec();
            let gap = min_gap(m).unwrap();
            group.bench_with_input(BenchmarkId::new(format!("m{m}"), size), &factors, |b, fs| {
                b.iter(|| {
                    let pd = decompose_product(black_box(fs), &sys, gap).unwrap();
                    verify_supports(&pd, &sys, SUPPORT_TOL)
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, fft, decompose, norms, paraproduct);
criterion_main!(benches);
