use std::hint::black_box;

use coact::clifford::{Algebra, AlgebraDescriptor};
use coact::comodule::{canonical_coaction, verify_comodule_algebra_with};
use coact::exec::Exec;
use coact::hopf::verify_hopf_structure;
use coact::inner::{enumerate_coactions, EnumerateOptions};
use coact::scalars::Field;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn verification(c: &mut Criterion) {
    let f = Field::rational();
    let a = Algebra::new(AlgebraDescriptor::from_ints(&f, 2, &[1, -1], &[1, 0], &[(1, 2, 1)])).unwrap();
    let rho = canonical_coaction(&a).unwrap();
    let en = rho.en().clone();
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("comodule_n2", name), &exec, |b, &e| {
            b.iter(|| black_box(verify_comodule_algebra_with(&rho, e)))
        });
        g.bench_with_input(BenchmarkId::new("hopf_n2", name), &exec, |b, &e| {
            b.iter(|| black_box(verify_hopf_structure(&en, e)))
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let f = Field::prime(5).unwrap();
    let a = Algebra::new(AlgebraDescriptor::from_ints(&f, 1, &[1], &[0], &[])).unwrap();
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        let opts = EnumerateOptions { exec, ..Default::default() };
        g.bench_with_input(BenchmarkId::new("quaternion_gf5", name), &opts, |b, o| {
            b.iter(|| black_box(enumerate_coactions(&a, o).unwrap().len()))
        });
    }
    g.finish();
}

criterion_group!(benches, verification, enumeration);
criterion_main!(benches);
