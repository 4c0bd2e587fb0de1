use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use sumfree::gf2n::{DlogTable, Fe, FieldSpec};
use sumfree::pointeval::{delta_eval, delta_eval_product, theta_eval, ThetaPlan};
use sumfree::zerosum::{census, inverse_sum, PolySelector};
use sumfree::{Subspace, SubspaceEnumerator};

fn field_mul(c: &mut Criterion) {
    let f = FieldSpec::with_default_modulus(17).unwrap();
    let table = DlogTable::new(&f).unwrap();
    let a = Fe(0x1234);
    let b = Fe(0x0f0f1);
    c.bench_function("mul_shift_xor_n17", |bch| bch.iter(|| std::hint::black_box(f.mul(a, b))));
    c.bench_function("mul_dlog_n17", |bch| bch.iter(|| std::hint::black_box(table.mul(a, b))));
    c.bench_function("inv_euclid_n17", |bch| bch.iter(|| std::hint::black_box(f.inv(a).unwrap())));
    c.bench_function("inv_dlog_n17", |bch| {
        bch.iter(|| std::hint::black_box(table.inv(a).unwrap()))
    });
}

fn determinants(c: &mut Criterion) {
    let f = FieldSpec::with_default_modulus(14).unwrap();
    let table = DlogTable::new(&f).unwrap();
    let pts: Vec<Fe> = vec![Fe(0x11), Fe(0x2f3), Fe(0x1b81), Fe(0x955)];
    c.bench_function("delta_gaussian_k4", |bch| {
        bch.iter(|| std::hint::black_box(delta_eval(&pts, &table)))
    });
    c.bench_function("delta_product_k4", |bch| {
        bch.iter(|| std::hint::black_box(delta_eval_product(&pts, &table)))
    });
    let plan = ThetaPlan::new(4).unwrap();
    c.bench_function("theta_planned_k4", |bch| {
        bch.iter(|| std::hint::black_box(plan.eval(&pts, &table)))
    });
    c.bench_function("theta_unplanned_k4", |bch| {
        bch.iter(|| std::hint::black_box(theta_eval(&pts, &table).unwrap()))
    });
}

fn subspace_scan(c: &mut Criterion) {
    let f = FieldSpec::with_default_modulus(10).unwrap();
    c.bench_function("inverse_sum_k4_n10", |bch| {
        let mut en = SubspaceEnumerator::new(10, 4).unwrap();
        bch.iter_batched(
            || {
                let m = en.next().unwrap_or_else(|| {
                    en = SubspaceEnumerator::new(10, 4).unwrap();
                    en.next().unwrap()
                });
                Subspace::from_span(
                    &m.rows_slice().iter().map(|&r| Fe(r)).collect::<Vec<_>>(),
                    &f,
                )
            },
            |e| std::hint::black_box(inverse_sum(&e).unwrap()),
            BatchSize::SmallInput,
        )
    });
}

fn census_sweep(c: &mut Criterion) {
    let f = FieldSpec::with_default_modulus(6).unwrap();
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("theta_6_2", |bch| {
        bch.iter(|| std::hint::black_box(census(PolySelector::Theta, 6, 2, &f).unwrap()))
    });
    g.bench_function("fk_6_2", |bch| {
        bch.iter(|| std::hint::black_box(census(PolySelector::Fk, 6, 2, &f).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, field_mul, determinants, subspace_scan, census_sweep);
criterion_main!(benches);
