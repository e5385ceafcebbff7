//! Corpus-level scoring throughput: word BLEU, ChrF++, and subword BLEU
//! (which adds a BPE encode of every segment) at two corpus sizes.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use mteval_bench::{synthetic_lines, synthetic_pairs};
use mteval_core::metrics::{chrf_pp, corpus_bleu, sp_bleu, BleuConfig, ChrfConfig};
use mteval_core::subword::train_bpe;

fn bench_word_metrics(c: &mut Criterion) {
    let bleu_config = BleuConfig::default();
    let chrf_config = ChrfConfig::default();
    let mut group = c.benchmark_group("word-metrics");
    for n in [100usize, 1_000] {
        let (hyps, refs) = synthetic_pairs(n, 42);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("bleu", n), &n, |b, _| {
            b.iter(|| corpus_bleu(black_box(&hyps), black_box(&refs), &bleu_config).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("chrf-pp", n), &n, |b, _| {
            b.iter(|| chrf_pp(black_box(&hyps), black_box(&refs), &chrf_config).unwrap())
        });
    }
    group.finish();
}

fn bench_subword_bleu(c: &mut Criterion) {
    let model = train_bpe(&synthetic_lines(1_000, 7), 400).expect("training corpus is valid");
    let bleu_config = BleuConfig::default();
    let mut group = c.benchmark_group("subword-bleu");
    for n in [100usize, 1_000] {
        let (hyps, refs) = synthetic_pairs(n, 42);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| sp_bleu(black_box(&hyps), black_box(&refs), &model, &bleu_config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_word_metrics, bench_subword_bleu);
criterion_main!(benches);
