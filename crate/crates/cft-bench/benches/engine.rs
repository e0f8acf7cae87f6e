use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cft_core::exact_linalg::det_rational;
use cft_core::gromov_witten::{km_counts, wdvv_residual, Cp2Point};
use cft_core::qseries::{eta_eval, partition_count, theta_eval};
use cft_core::torus::{z_boson, z_minimal};
use cft_core::virasoro::{
    gram_matrix, irreducible_character, kac_determinant_closed, null_vectors,
};
use cft_core::{BigRational, Complex64, TorusPoint};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn q_series(c: &mut Criterion) {
    let tau = TorusPoint::new(Complex64::new(0.05, 0.95)).unwrap();
    c.bench_function("eta 1e-12", |b| {
        b.iter(|| eta_eval(black_box(&tau), 1e-12).unwrap())
    });
    let w = Complex64::new(0.3, 0.1);
    c.bench_function("theta3 1e-12", |b| {
        b.iter(|| theta_eval(3, black_box(w), &tau, 1e-12).unwrap())
    });
    c.bench_function("partition count 200", |b| {
        b.iter(|| partition_count(black_box(200)))
    });
}

fn verma(c: &mut Criterion) {
    let charge = rat(1, 2);
    let h = rat(1, 16);
    c.bench_function("gram level 5", |b| {
        b.iter(|| gram_matrix(black_box(&charge), &h, 5))
    });
    let gram = gram_matrix(&charge, &h, 5);
    c.bench_function("gram det level 5", |b| b.iter(|| det_rational(black_box(&gram))));
    let m = rat(3, 1);
    c.bench_function("kac closed level 5", |b| {
        b.iter(|| kac_determinant_closed(black_box(&m), &h, 5).unwrap())
    });
    c.bench_function("null vectors level 3", |b| {
        b.iter(|| null_vectors(&rat(1, 1), &rat(1, 1), black_box(3)))
    });
    c.bench_function("ising character 24 levels", |b| {
        b.iter(|| irreducible_character(3, 4, 1, 1, black_box(24)).unwrap())
    });
}

fn torus(c: &mut Criterion) {
    let tau = TorusPoint::new(Complex64::new(0.3, 1.1)).unwrap();
    let rho = rat(9, 4);
    c.bench_function("z boson", |b| {
        b.iter(|| z_boson(black_box(&tau), &rho, 1e-10).unwrap())
    });
    c.bench_function("z minimal (3,4)", |b| {
        b.iter(|| z_minimal(3, 4, black_box(&tau), 24, 1e-10).unwrap())
    });
}

fn curve_counts(c: &mut Criterion) {
    c.bench_function("km counts dmax 8", |b| b.iter(|| km_counts(black_box(8))));
    let point = Cp2Point { t0: 0.1, t1: 0.2, t2: 0.05, q: 0.1 };
    c.bench_function("wdvv residual dmax 5", |b| {
        b.iter(|| wdvv_residual(black_box(point), 5, (0, 1, 1, 2)).unwrap())
    });
}

criterion_group!(benches, q_series, verma, torus, curve_counts);
criterion_main!(benches);
