use std::hint::black_box;

use circulus::hilbertlab::{normalize_instance, verify_range};
use circulus::par::Mode;
use circulus::poly::{MultiPoly, UniPoly};
use circulus::symfun::{decompose_batch, elementary_sym};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn hilbert(c: &mut Criterion) {
    let inst = normalize_instance(&UniPoly::parse("X^2 + 1").unwrap(), &BigInt::from(2), 256).unwrap();
    let mut g = c.benchmark_group("verify_range");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "X^2+1 k<=6"), &mode, |b, &m| {
            b.iter(|| verify_range(black_box(&inst), 6, 64, m))
        });
    }
    g.finish();
}

/// Products of elementary symmetric polynomials in four variables.
fn workload() -> Vec<MultiPoly> {
    let s: Vec<MultiPoly> = (1..=4).map(|k| elementary_sym(4, k).unwrap()).collect();
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            for k in j..4 {
                out.push(s[i].try_mul(&s[j]).unwrap().try_mul(&s[k]).unwrap());
            }
        }
    }
    out
}

fn decompose(c: &mut Criterion) {
    let ps = workload();
    let mut g = c.benchmark_group("decompose_batch");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, ps.len()), &mode, |b, &m| {
            b.iter(|| decompose_batch(black_box(&ps), m))
        });
    }
    g.finish();
}

criterion_group!(benches, hilbert, decompose);
criterion_main!(benches);
