use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use num_bigint::BigUint;
use smoothsum_core::census::{census, min_ratio};
use smoothsum_core::{
    chain_admissible, parse_rational, smooth_upto, Decomposer, MultisetChain, Params, RatioCap,
};

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("smooth_upto");
    for p in [3u64, 19, 1_048_573] {
        let prm = Params::new(p).unwrap();
        let bound = BigUint::from(1u32) << 256u32;
        g.bench_with_input(BenchmarkId::from_parameter(p), &prm, |b, prm| {
            b.iter(|| smooth_upto(prm, black_box(&bound)).len())
        });
    }
    g.finish();
}

fn decompose(c: &mut Criterion) {
    let mut g = c.benchmark_group("decompose");
    let p3 = Params::new(3).unwrap();
    let d = Decomposer::preferred(&p3).with_capacity(&BigUint::from(1_000_000u32));
    g.bench_function("p3_first_10k_of_1e6", |b| {
        b.iter(|| {
            (990_001..=1_000_000u32)
                .map(|n| d.decompose(&BigUint::from(n)).unwrap().terms.len())
                .sum::<usize>()
        })
    });
    let d = Decomposer::preferred(&p3);
    let n = (BigUint::from(1u32) << 1024u32) - 1u32;
    g.bench_function("p3_1024_bit", |b| {
        b.iter(|| d.decompose(black_box(&n)).unwrap())
    });
    g.bench_function("p3_trace_1024_bit", |b| {
        b.iter(|| d.trace(black_box(&n)).unwrap())
    });

    let p = (1u64 << 20) - 3;
    let mut first = vec![p, 2, 2, 4, 8, 8];
    first.extend((4..=19).map(|j| 1u64 << j));
    first.push(1 << 19);
    let chain = MultisetChain::new(p, p, vec![first, vec![2, 2, 4, 8, 8], vec![2, 2], vec![2]]);
    let prm = Params::new(p).unwrap();
    g.bench_function("chain_admissible_large_p", |b| {
        b.iter(|| chain_admissible(black_box(&chain), &prm))
    });
    let d = Decomposer::new(&prm, &chain).unwrap();
    g.bench_function("large_p_u64_max", |b| {
        b.iter_batched(
            || BigUint::from(u64::MAX),
            |n| d.decompose(&n).unwrap(),
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

fn oracles(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    let p3 = Params::new(3).unwrap();
    let cap = RatioCap::inclusive(parse_rational("32/9").unwrap());
    g.bench_function("p3_32_9_1e5", |b| {
        b.iter(|| census(&p3, &cap, 100_000).unwrap().count)
    });
    let six = RatioCap::strict(parse_rational("6").unwrap());
    g.bench_function("min_ratio_p3_n_1_to_500", |b| {
        b.iter(|| {
            (1..=500u64)
                .filter(|&n| min_ratio(n, &p3, &six).ratio.is_some())
                .count()
        })
    });
    g.finish();
}

criterion_group!(benches, generation, decompose, oracles);
criterion_main!(benches);
