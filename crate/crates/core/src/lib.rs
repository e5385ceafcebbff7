//! Core library for building many-to-many low-resource machine-translation
//! benchmarks and scoring system outputs against them.
//!
//! The crate is organised around one pipeline and one measurement stack:
//!
//! * **Benchmark construction** — [`registry`] describes languages and
//!   language sets, [`corpus`] and [`manifest`] load parallel data,
//!   [`builder`] filters, splits, expands, caps, and renders it into
//!   instruction-wrapped records ([`record`]), and [`validate`] re-checks
//!   the result from disk alone.
//! * **Evaluation** — [`subword`] trains and applies the byte-pair subword
//!   model used by subword BLEU, [`metrics`] implements BLEU, subword BLEU,
//!   and ChrF++ with explicit smoothing semantics, and [`harness`] scores
//!   whole runs and aggregates category reports.
//!
//! Everything is deterministic: randomness flows exclusively through
//! [`rng::derive_seed`], so equal inputs and seeds give byte-identical
//! outputs. [`bundled`] ships the language registry, the reference
//! per-direction counts, and a placeholder manifest that reproduces them.

pub mod builder;
pub mod bundled;
pub mod corpus;
pub mod harness;
pub mod manifest;
pub mod metrics;
pub mod record;
pub mod registry;
pub mod rng;
pub mod subword;
pub mod validate;

pub use builder::{
    build_benchmark, write_benchmark, BenchmarkDataset, BenchmarkStats, BuilderConfig,
    BuilderError, DirectionCounts, DirectionDataset, MergePolicy, SplitCaps,
};
pub use corpus::{
    load_parallel_corpus, CorpusError, CorpusFormat, ParallelCorpus, QualityTier, SentencePair,
};
pub use harness::{
    aggregate_categories, load_run, render_report, score_run, CategoryReport, CategoryRow,
    HarnessError, PairScore, ReportFormat, RunScores, SystemRun,
};
pub use manifest::{load_manifest, load_manifest_corpora, ManifestError, ManifestRow};
pub use metrics::{
    chrf_pp, corpus_bleu, sp_bleu, BleuConfig, BleuScore, ChrfConfig, ChrfScore, MetricError,
    Smoothing, Tokenization,
};
pub use record::{parse_record, serialize_record, RecordError, TranslationRecord};
pub use registry::{
    parse_pair_code, Anchor, CategoryLabel, DirectedPair, LanguageInfo, LanguageRegistry,
    RegistryError,
};
pub use subword::{train_bpe, SubwordError, SubwordModel};
pub use validate::{
    load_benchmark, validate_benchmark, CheckStatus, LoadedBenchmark, ValidateError,
    ValidateOptions, ValidationReport,
};
