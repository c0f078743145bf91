use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use padic_embed::heights::mahler_measure;
use padic_embed::modular::{count_roots_n, generic_prime, roots_mod_p};
use padic_embed::numfield::{FieldElement, NumberField};
use padic_embed::padic::{find_embedding, hensel_lift, EmbedOptions};
use padic_embed::polyarith::cyclotomic;
use padic_embed::IntPolynomial;

fn kernels(c: &mut Criterion) {
    let f = IntPolynomial::from_i64(&[-2, 0, 0, 1]);
    let f8 = IntPolynomial::from_i64(&[7, -3, 11, 0, -5, 2, 9, -1, 4]);
    let phi = cyclotomic(60);

    c.bench_function("discriminant degree 8", |b| b.iter(|| black_box(&f8).discriminant()));
    c.bench_function("mahler measure degree 8", |b| b.iter(|| mahler_measure(black_box(&f8))));
    c.bench_function("roots mod large prime", |b| {
        b.iter(|| roots_mod_p(black_box(&phi), 1_000_000_021))
    });
    c.bench_function("hensel lift to 256 digits", |b| {
        b.iter(|| hensel_lift(black_box(&f), 11, 7, 256))
    });
    c.bench_function("generic prime quartic", |b| {
        let g = IntPolynomial::from_i64(&[-6, 4, 0, -3, 5]);
        b.iter(|| generic_prime(black_box(&g)))
    });
    c.bench_function("congruence count mod 7^4", |b| {
        b.iter(|| count_roots_n(black_box(&f8), 10_000, 2401))
    });
    c.bench_function("embedding search in Q(2^(1/3))", |b| {
        let k = NumberField::new(f.clone()).unwrap();
        let named = vec![
            ("a".to_string(), FieldElement::from_ints(&k, &[7, 1], 1)),
            ("b".to_string(), FieldElement::from_ints(&k, &[1, -3, 2], 5)),
        ];
        let opts = EmbedOptions::default();
        b.iter(|| find_embedding(&k, black_box(&named), &opts))
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
