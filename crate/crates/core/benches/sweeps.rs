//! Benchmarks comparing the rayon-parallel sweeps against the sequential
//! reference path on the workloads that dominate the acceptance suite.

use criterion::{criterion_group, criterion_main, Criterion};
use cuspidal_core::birational::{chain_contracts, chain_det, chain_is_negdef, sweep_chains};
use cuspidal_core::hn::{block_mu_oracle, expand_block};
use cuspidal_core::par::{par_flat_map, seq_flat_map};

fn contractible_pred(w: &[i64]) -> bool {
    w.iter().filter(|x| **x == 1).count() == 1
        && chain_is_negdef(w)
        && chain_det(w) == 1
        && chain_contracts(w)
}

fn bench_chain_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain_sweep_len8");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| sweep_chains(8, 6, contractible_pred))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            // same partitioning, forced through the sequential driver
            let firsts: Vec<i64> = (1..=6).collect();
            let mut out = seq_flat_map(&firsts, |&first| {
                let mut hits = Vec::new();
                let mut w = vec![1i64; 8];
                w[0] = first;
                loop {
                    if contractible_pred(&w) {
                        hits.push(w.clone());
                    }
                    let mut pos = 8;
                    loop {
                        if pos == 1 {
                            return hits;
                        }
                        pos -= 1;
                        if w[pos] < 6 {
                            w[pos] += 1;
                            break;
                        }
                        w[pos] = 1;
                    }
                }
            });
            out.sort_unstable();
            out
        })
    });
    group.finish();
}

fn pair_check(cc: u64, p: u64) -> u64 {
    let mu = block_mu_oracle(cc, p);
    assert_eq!(mu, expand_block(cc, p));
    mu.iter().map(|x| x * x).sum()
}

fn bench_pair_identities(c: &mut Criterion) {
    let pairs: Vec<(u64, u64)> = (2..=200u64)
        .flat_map(|cc| (2..=cc).map(move |p| (cc, p)))
        .collect();
    let mut group = c.benchmark_group("pair_identity_sweep");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| par_flat_map(&pairs, |(cc, p)| vec![pair_check(*cc, *p)]))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| seq_flat_map(&pairs, |(cc, p)| vec![pair_check(*cc, *p)]))
    });
    group.finish();
}

criterion_group!(benches, bench_chain_sweep, bench_pair_identities);
criterion_main!(benches);
