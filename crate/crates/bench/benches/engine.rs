use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use hpmon_core::{Bii, Gmn, Side};

fn class_enumeration(c: &mut Criterion) {
    let bii = Bii::new();
    let m = bii.monoid();
    let w = m.word("b c b c b c b c b c b c").unwrap();
    c.bench_function("bii/enumerate (bc)^6", |b| b.iter(|| m.enumerate_uncached(black_box(&w)).unwrap()));

    let g = Gmn::new(2, 2).unwrap();
    let d2 = g.delta().pow(2);
    c.bench_function("gmn22/enumerate Δ^2", |b| b.iter(|| g.monoid().enumerate_uncached(black_box(&d2)).unwrap()));
}

fn divisibility(c: &mut Criterion) {
    let bii = Bii::new();
    let m = bii.monoid();
    let (u, v) = (m.word("b b b").unwrap(), m.word("a b c b c b a c").unwrap());
    c.bench_function("bii/left divides, cold memo", |b| {
        b.iter_batched(
            || m.clear_cache(),
            |_| m.is_divisor(Side::Left, black_box(&u), black_box(&v)).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bii_procedures(c: &mut Criterion) {
    let bii = Bii::new();
    let m = bii.monoid();
    let w = m.word("a c b a b b c a a b").unwrap();
    c.bench_function("bii/normal form", |b| b.iter(|| bii.normal_form(black_box(&w)).unwrap()));
    let (u, v) = (m.word("b a b b a c").unwrap(), m.word("a b b b c a").unwrap());
    c.bench_function("bii/conjugate", |b| b.iter(|| bii.conjugate(black_box(&u), black_box(&v)).unwrap()));
}

fn gmn_procedures(c: &mut Criterion) {
    let g = Gmn::new(2, 2).unwrap();
    let m = g.monoid();
    let w = m.word("s t1 t2 t1 u1").unwrap();
    c.bench_function("gmn22/property P", |b| b.iter(|| g.property_p(black_box(&w)).unwrap()));
    let (u, v) = (m.word("s t1 u1 t2").unwrap(), m.word("t2 s t1 u1").unwrap());
    c.bench_function("gmn22/conjugate", |b| b.iter(|| g.conjugate(black_box(&u), black_box(&v)).unwrap()));
    c.bench_function("gmn22/trans_min_bounded(w, 6)", |b| {
        b.iter_batched(|| m.clear_cache(), |_| m.trans_min_bounded(black_box(&w), 6).unwrap(), BatchSize::SmallInput)
    });
}

criterion_group!(benches, class_enumeration, divisibility, bii_procedures, gmn_procedures);
criterion_main!(benches);
