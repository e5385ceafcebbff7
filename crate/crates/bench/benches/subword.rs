//! Subword model lifecycle throughput: BPE training at two vocabulary
//! sizes, per-line encoding with a trained model, and the text
//! serialization round trip.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use mteval_bench::synthetic_lines;
use mteval_core::subword::{train_bpe, SubwordModel};

fn bench_train(c: &mut Criterion) {
    let lines = synthetic_lines(1_000, 7);
    let mut group = c.benchmark_group("bpe-train");
    group.sample_size(10); // training is the slow path; keep wall time sane
    for vocab in [200usize, 400] {
        group.bench_with_input(BenchmarkId::from_parameter(vocab), &vocab, |b, &vocab| {
            b.iter(|| train_bpe(black_box(&lines), vocab).unwrap())
        });
    }
    group.finish();
}

fn bench_encode(c: &mut Criterion) {
    let model = train_bpe(&synthetic_lines(1_000, 7), 400).expect("training corpus is valid");
    let lines = synthetic_lines(1_000, 11);
    let mut group = c.benchmark_group("bpe-encode");
    group.throughput(Throughput::Elements(lines.len() as u64));
    group.bench_function("lines", |b| {
        b.iter(|| {
            let mut pieces = 0usize;
            for line in &lines {
                pieces += model.encode(black_box(line)).len();
            }
            pieces
        })
    });
    group.finish();
}

fn bench_serialize(c: &mut Criterion) {
    let model = train_bpe(&synthetic_lines(1_000, 7), 400).expect("training corpus is valid");
    let text = model.to_file_string();
    let mut group = c.benchmark_group("bpe-serialize");
    group.bench_function("to-string", |b| {
        b.iter(|| black_box(&model).to_file_string())
    });
    group.bench_function("from-string", |b| {
        b.iter(|| SubwordModel::from_file_str(black_box(&text)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_train, bench_encode, bench_serialize);
criterion_main!(benches);
