use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ekp_bench::{entry, unit};
use ekp_core::jordan::jordan_product;
use ekp_core::linalg::Matrix;
use ekp_core::sampling::{random_point, rng, sample_off_hypersurface};
use ekp_core::tau::tau;
use ekp_core::{analyze, solve_linear};

fn polynomial_eval(c: &mut Criterion) {
    let e = entry("herm3_O");
    let x = random_point(&mut rng(1), e.n);
    c.bench_function("eval herm3_O", |b| b.iter(|| e.form.eval(black_box(&x)).unwrap()));
    c.bench_function("hessian herm3_O", |b| b.iter(|| e.form.hessian_at(black_box(&x)).unwrap()));
}

fn linear_algebra(c: &mut Criterion) {
    let mut r = rng(2);
    let rows: Vec<_> = (0..20).map(|_| random_point(&mut r, 20)).collect();
    let m = Matrix::from_rows(rows).unwrap();
    let rhs = random_point(&mut r, 20);
    c.bench_function("solve 20x20", |b| b.iter(|| solve_linear(black_box(&m), &rhs).unwrap()));
    c.bench_function("det 20x20", |b| b.iter(|| black_box(&m).det().unwrap()));
}

fn legendre(c: &mut Criterion) {
    let mut g = c.benchmark_group("legendre");
    g.sample_size(10);
    for name in ["triple_product", "herm3_R", "herm3_C"] {
        let e = entry(name);
        g.bench_function(name, |b| b.iter(|| analyze(black_box(&e.form), 42)));
    }
    g.finish();
}

fn jordan(c: &mut Criterion) {
    let mut g = c.benchmark_group("jordan");
    g.sample_size(10);
    for name in ["herm3_R", "herm3_H"] {
        let e = entry(name);
        let u = unit(&e);
        g.bench_function(format!("structure {name}"), |b| b.iter(|| jordan_product(&e.form, black_box(&u)).unwrap()));
        let a = sample_off_hypersurface(&e.form, 1, 3).unwrap().remove(0);
        g.bench_function(format!("tau {name}"), |b| b.iter(|| tau(&e.form, black_box(&a)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, polynomial_eval, linear_algebra, legendre, jordan);
criterion_main!(benches);
