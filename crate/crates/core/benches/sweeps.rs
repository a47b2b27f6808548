use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use coulomb_shift::batch;
use coulomb_shift::coulomb::{basis_element, is_member, DiffOp};
use coulomb_shift::gauge::{GaugeTheory, HbarConvention};
use coulomb_shift::sample;

/// Basis pairs whose twisted product is tested for membership.
fn closure_cases(n: usize) -> Vec<(GaugeTheory, DiffOp, DiffOp)> {
    let mut rng = sample::rng(1);
    let conv = HbarConvention::Shift1;
    (0..n)
        .map(|_| {
            let t = sample::theory(&mut rng, 2, 4, 2);
            let s = t.space(&[]);
            let b = basis_element(&t, &sample::coweight(&mut rng, t.rank(), 2), conv, &s).unwrap();
            let c = basis_element(&t, &sample::coweight(&mut rng, t.rank(), 2), conv, &s).unwrap();
            (t, b, c)
        })
        .collect()
}

fn closed((t, b, c): &(GaugeTheory, DiffOp, DiffOp)) -> bool {
    is_member(&b.twisted_product(c).unwrap(), t, HbarConvention::Shift1).unwrap()
}

fn sweeps(cr: &mut Criterion) {
    let cases = closure_cases(200);
    let mut g = cr.benchmark_group("closure");
    g.sample_size(10);
    g.bench_function("par", |bn| bn.iter(|| black_box(batch::map(&cases, closed))));
    g.bench_function("seq", |bn| bn.iter(|| black_box(batch::map_seq(&cases, closed))));
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
