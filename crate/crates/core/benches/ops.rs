//! Benchmarks for the data-parallel inner loops. Each benchmark id carries
//! the active execution mode, so running the suite twice — once with the
//! default `parallel` feature and once with `--no-default-features` —
//! produces directly comparable entries:
//!
//! ```text
//! cargo bench -p kepler-core
//! cargo bench -p kepler-core --no-default-features
//! ```

use criterion::{criterion_group, criterion_main, Criterion};
use kepler_core::kernel::{k_s_expansion, KernelCoefficients};
use kepler_core::minors::conical_poly;
use kepler_core::partitions::Partition;
use kepler_core::peter_weyl::span_basis;
use kepler_core::poly::MatrixPolynomial;
use kepler_core::scalar::ratio;
use kepler_core::{minimal_generators, SymbolicPowerSpec, TriplePars};
use num_rational::BigRational;
use std::hint::black_box;

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "par"
    } else {
        "seq"
    }
}

fn bench_minimal_generators(c: &mut Criterion) {
    let nu3 = SymbolicPowerSpec::new(vec![15, 5, 1]).unwrap();
    c.bench_function(&format!("minimal_generators/15,5,1/{}", mode()), |b| {
        b.iter(|| minimal_generators(black_box(&nu3)))
    });
    let nu4 = SymbolicPowerSpec::new(vec![12, 8, 4, 2]).unwrap();
    c.bench_function(&format!("minimal_generators/12,8,4,2/{}", mode()), |b| {
        b.iter(|| minimal_generators(black_box(&nu4)))
    });
}

fn bench_poly_product(c: &mut Criterion) {
    // dense-ish degree-4 polynomial in 9 variables, squared
    let mut base = MatrixPolynomial::<BigRational>::one(3, 3);
    for v in 0..9usize {
        let var = MatrixPolynomial::variable(v / 3, v % 3, 3, 3).unwrap();
        base = base.try_add(&var.scale(&ratio(1 + v as i64, 2))).unwrap();
    }
    let big = base.pow(4);
    c.bench_function(
        &format!("poly_product/{}t^2/{}", big.num_terms(), mode()),
        |b| b.iter(|| black_box(&big).try_mul(black_box(&big)).unwrap()),
    );
    let pars = TriplePars::new(3, 3).unwrap();
    let lam = Partition::new(vec![4, 3, 2]).unwrap();
    c.bench_function(&format!("conical_poly/4,3,2/{}", mode()), |b| {
        b.iter(|| conical_poly::<BigRational>(black_box(&lam), pars).unwrap())
    });
}

fn bench_span_basis(c: &mut Criterion) {
    let pars = TriplePars::new(2, 2).unwrap();
    let lam = Partition::new(vec![2, 1]).unwrap();
    c.bench_function(&format!("span_basis/2,1 r=s=2/{}", mode()), |b| {
        b.iter(|| span_basis(black_box(&lam), pars, 7, 1e-9).unwrap())
    });
    // large degree block: orbit samples are expensive enough to fan out
    let pars3 = TriplePars::new(3, 3).unwrap();
    let lam3 = Partition::new(vec![2, 1, 0]).unwrap();
    let mut group = c.benchmark_group("span_basis_large");
    group.sample_size(10);
    group.bench_function(format!("2,1,0 r=s=3/{}", mode()), |b| {
        b.iter(|| span_basis(black_box(&lam3), pars3, 7, 1e-9).unwrap())
    });
    group.finish();
}

fn bench_kernel_expansion(c: &mut Criterion) {
    let lam = Partition::new(vec![2, 1, 0]).unwrap();
    let a = ratio(2, 1);
    c.bench_function(&format!("k_s_expansion/2,1,0 N=12/{}", mode()), |b| {
        b.iter(|| {
            k_s_expansion(
                black_box(&KernelCoefficients::Flat),
                black_box(&lam),
                1,
                12,
                &a,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_minimal_generators,
    bench_poly_product,
    bench_span_basis,
    bench_kernel_expansion
);
criterion_main!(benches);
