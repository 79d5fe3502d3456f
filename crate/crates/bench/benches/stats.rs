use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fiq_bench::{ensemble, random_bits};
use fiq_core::stats::{battery, two_sample_equivalence, DigitStream, DEFAULT_ALPHA};
use fiq_core::supplement::{measure_binary, HiddenVar};
use num_rational::BigRational;

fn per_stream(c: &mut Criterion) {
    let s = DigitStream::new(random_bits(5, 100_000)).unwrap();
    c.bench_function("battery_100k", |b| b.iter(|| battery(black_box(&s), DEFAULT_ALPHA).unwrap()));
}

fn two_sample(c: &mut Criterion) {
    let a = ensemble(0, 200, 1000);
    let b = ensemble(1000, 200, 1000);
    c.bench_function("two_sample_200x1000_k4", |bench| {
        bench.iter(|| two_sample_equivalence(black_box(&a), black_box(&b), 4, DEFAULT_ALPHA).unwrap())
    });
}

fn measurement(c: &mut Criterion) {
    let p = BigRational::new(3.into(), 10.into());
    let mut seed = 0u64;
    c.bench_function("measure_binary", |b| {
        b.iter(|| {
            seed += 1;
            measure_binary(&p, HiddenVar::uniform(seed)).unwrap()
        })
    });
}

criterion_group!(benches, per_stream, two_sample, measurement);
criterion_main!(benches);
