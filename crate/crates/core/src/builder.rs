//! Benchmark construction: quality filtering, deterministic splitting,
//! bidirectional expansion, per-split capping, and instruction rendering.
//!
//! # Pipeline
//!
//! [`build_benchmark`] takes loaded corpora and produces one
//! [`DirectionDataset`] per translation direction:
//!
//! 1. corpora outside the allowed quality tiers are dropped;
//! 2. corpora covering the same unordered language pair are merged according
//!    to the configured [`MergePolicy`];
//! 3. each corpus is split into train/dev/test — official splits are
//!    returned verbatim, everything else is shuffled and cut by ratio;
//! 4. each split is expanded into both directions: *scarce* corpora (total
//!    examples below `scarce_threshold`) contribute every example to both
//!    directions (reverse direction swaps source and target), while larger
//!    corpora are halved — the declared direction takes the first
//!    ⌊k/2⌋ examples of a split, the reverse direction the rest — so the two
//!    directions never share text;
//! 5. ratio-split directions are down-sampled to the per-split caps
//!    (official splits bypass caps entirely);
//! 6. sentence pairs become instruction-wrapped records with per-record
//!    provenance.
//!
//! # Determinism
//!
//! All randomness flows through seeds derived from `config.seed`, the stage
//! name, and a stable key (corpus or direction identity), so a manifest and
//! a seed fully determine the output bytes. Two corpora only ever influence
//! each other through explicit merging — adding an unrelated corpus to a
//! manifest never changes another pair's samples.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{ParallelCorpus, QualityTier, SentencePair};
use crate::record::{serialize_record, TranslationRecord};
use crate::registry::{DirectedPair, LanguageInfo, LanguageRegistry, RegistryError};
use crate::rng::{derive_seed, stage_rng};

/// Split names in canonical order.
pub const SPLIT_NAMES: [&str; 3] = ["train", "dev", "test"];

/// Errors from benchmark construction.
#[derive(Debug, Error)]
pub enum BuilderError {
    #[error("no corpora remain after quality filtering")]
    EmptyManifest,
    #[error("corpus `{0}` has no sentence pairs")]
    EmptyCorpus(String),
    #[error("multiple corpora cover pair `{0}` and the merge policy is `error`")]
    DuplicateDirection(String),
    #[error("cannot merge corpora for pair `{pair}`: member `{member}` has official splits")]
    MergeOfficialSplits { pair: String, member: String },
    #[error("invalid builder config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
}

/// Maximum examples kept per split and direction for ratio-split corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitCaps {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

impl Default for SplitCaps {
    fn default() -> Self {
        SplitCaps {
            train: 5000,
            dev: 50,
            test: 200,
        }
    }
}

impl SplitCaps {
    pub fn for_split(&self, split: &str) -> usize {
        match split {
            "train" => self.train,
            "dev" => self.dev,
            "test" => self.test,
            other => unreachable!("unknown split `{other}`"),
        }
    }
}

/// What to do when two manifest corpora cover the same unordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MergePolicy {
    /// Reorient to the first corpus's declared direction and concatenate in
    /// manifest order before splitting.
    Concatenate,
    /// Refuse with [`BuilderError::DuplicateDirection`].
    Error,
}

/// Benchmark construction parameters.
#[derive(Debug, Clone, Serialize)]
pub struct BuilderConfig {
    /// Corpora outside these tiers are dropped before any other step.
    pub allowed_tiers: BTreeSet<QualityTier>,
    /// Train/dev/test fractions for corpora without official splits.
    pub split_ratios: [f64; 3],
    pub caps: SplitCaps,
    /// Corpora with fewer total examples than this are considered scarce:
    /// both directions receive every example instead of disjoint halves.
    pub scarce_threshold: usize,
    pub seed: u64,
    pub merge_policy: MergePolicy,
}

impl Default for BuilderConfig {
    fn default() -> Self {
        BuilderConfig {
            allowed_tiers: [QualityTier::HumanEvaluated, QualityTier::Gold]
                .into_iter()
                .collect(),
            split_ratios: [0.8, 0.1, 0.1],
            caps: SplitCaps::default(),
            scarce_threshold: 1000,
            seed: 0,
            merge_policy: MergePolicy::Concatenate,
        }
    }
}

impl BuilderConfig {
    pub fn validate(&self) -> Result<(), BuilderError> {
        let sum: f64 = self.split_ratios.iter().sum();
        if self.split_ratios.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
            return Err(BuilderError::BadConfig(
                "split ratios must each lie in [0, 1]".to_string(),
            ));
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(BuilderError::BadConfig(format!(
                "split ratios must sum to 1, got {sum}"
            )));
        }
        if self.caps.train == 0 || self.caps.dev == 0 || self.caps.test == 0 {
            return Err(BuilderError::BadConfig(
                "split caps must be positive".to_string(),
            ));
        }
        if self.allowed_tiers.is_empty() {
            return Err(BuilderError::BadConfig(
                "allowed_tiers must not be empty".to_string(),
            ));
        }
        Ok(())
    }
}

/// Indices into a corpus's sentence list, one vector per split.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub dev: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitIndices {
    pub fn split(&self, name: &str) -> &[usize] {
        match name {
            "train" => &self.train,
            "dev" => &self.dev,
            "test" => &self.test,
            other => unreachable!("unknown split `{other}`"),
        }
    }
}

/// Where one record came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Source collection name (merged corpora record the actual member).
    pub source_name: String,
    /// Sentence id inside that collection.
    pub sentence_id: String,
    /// True when the record's direction is the reverse of the corpus's
    /// declared direction (source and target were swapped).
    pub origin_reversed: bool,
}

/// One record plus its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenancedRecord {
    pub record: TranslationRecord,
    pub provenance: Provenance,
}

/// All records for one translation direction.
#[derive(Debug, Clone)]
pub struct DirectionDataset {
    pub pair: DirectedPair,
    pub from_official_splits: bool,
    pub train: Vec<ProvenancedRecord>,
    pub dev: Vec<ProvenancedRecord>,
    pub test: Vec<ProvenancedRecord>,
}

impl DirectionDataset {
    pub fn split(&self, name: &str) -> &[ProvenancedRecord] {
        match name {
            "train" => &self.train,
            "dev" => &self.dev,
            "test" => &self.test,
            other => unreachable!("unknown split `{other}`"),
        }
    }
}

/// A complete benchmark: directions sorted by pair code, plus the config
/// that produced them.
#[derive(Debug, Clone)]
pub struct BenchmarkDataset {
    pub directions: Vec<DirectionDataset>,
    pub config: BuilderConfig,
}

/// Per-direction example counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionCounts {
    pub pair: DirectedPair,
    pub train: usize,
    pub dev: usize,
    pub test: usize,
    pub from_official_splits: bool,
}

impl DirectionCounts {
    pub fn total(&self) -> usize {
        self.train + self.dev + self.test
    }

    pub fn split(&self, name: &str) -> usize {
        match name {
            "train" => self.train,
            "dev" => self.dev,
            "test" => self.test,
            other => unreachable!("unknown split `{other}`"),
        }
    }
}

/// Aggregate benchmark statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchmarkStats {
    pub n_directions: usize,
    pub n_languages: usize,
    pub train_total: u64,
    pub dev_total: u64,
    pub test_total: u64,
    pub per_direction: Vec<DirectionCounts>,
}

impl BenchmarkStats {
    /// Build the aggregate view from per-direction counts.
    pub fn from_counts(per_direction: Vec<DirectionCounts>) -> BenchmarkStats {
        let languages: BTreeSet<&str> = per_direction
            .iter()
            .flat_map(|c| [c.pair.src.as_str(), c.pair.tgt.as_str()])
            .collect();
        BenchmarkStats {
            n_directions: per_direction.len(),
            n_languages: languages.len(),
            train_total: per_direction.iter().map(|c| c.train as u64).sum(),
            dev_total: per_direction.iter().map(|c| c.dev as u64).sum(),
            test_total: per_direction.iter().map(|c| c.test as u64).sum(),
            per_direction,
        }
    }
}

/// Count records per direction and aggregate.
pub fn compute_statistics(directions: &[DirectionDataset]) -> BenchmarkStats {
    BenchmarkStats::from_counts(
        directions
            .iter()
            .map(|d| DirectionCounts {
                pair: d.pair.clone(),
                train: d.train.len(),
                dev: d.dev.len(),
                test: d.test.len(),
                from_official_splits: d.from_official_splits,
            })
            .collect(),
    )
}

/// Drop corpora whose tier is not allowed, preserving order.
pub fn filter_by_quality(
    corpora: Vec<ParallelCorpus>,
    config: &BuilderConfig,
) -> Vec<ParallelCorpus> {
    corpora
        .into_iter()
        .filter(|c| config.allowed_tiers.contains(&c.tier))
        .collect()
}

/// The instruction line attached to every record targeting `tgt`.
pub fn render_instruction(tgt: &LanguageInfo) -> String {
    format!(
        "Translate the following text to {} language. Return only the translated sentence \
         only. Do not repeat the instruction.",
        tgt.name
    )
}

/// Stable identity of a corpus for seed derivation.
fn corpus_key(corpus: &ParallelCorpus) -> String {
    format!("{}/{}", corpus.pair.code(), corpus.source_name)
}

/// Split a corpus into train/dev/test index lists.
///
/// Official splits are returned verbatim, in their published order. Ratio
/// splits shuffle the pool with a seed derived from the corpus identity and
/// assign `⌊ratio·n⌋` examples to train and dev (the small epsilon guards
/// against `0.3 * 10 == 2.999…` float artifacts), with the remainder going
/// to test; dev is drawn from the shuffled pool first, then test, then
/// train, so evaluation data is the most stable part as caps or ratios
/// change.
pub fn split_corpus(
    corpus: &ParallelCorpus,
    config: &BuilderConfig,
) -> Result<SplitIndices, BuilderError> {
    if corpus.is_empty() {
        return Err(BuilderError::EmptyCorpus(corpus_key(corpus)));
    }
    if let Some(official) = &corpus.official_splits {
        let index_of: BTreeMap<&str, usize> = corpus
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.as_str(), i))
            .collect();
        let resolve = |ids: &[String]| -> Vec<usize> {
            ids.iter()
                .map(|id| {
                    *index_of
                        .get(id.as_str())
                        .expect("official ids validated on load")
                })
                .collect()
        };
        return Ok(SplitIndices {
            train: resolve(&official.train),
            dev: resolve(&official.dev),
            test: resolve(&official.test),
        });
    }

    let n = corpus.len();
    let count = |ratio: f64| (ratio * n as f64 + 1e-9).floor() as usize;
    let n_train = count(config.split_ratios[0]);
    let n_dev = count(config.split_ratios[1]);
    // Validated ratios sum to 1, so the two floors never exceed the pool.
    debug_assert!(n_train + n_dev <= n);
    let n_test = n - n_train - n_dev;

    let mut pool: Vec<usize> = (0..n).collect();
    let mut rng = stage_rng(config.seed, "split", &corpus_key(corpus));
    pool.shuffle(&mut rng);

    let dev: Vec<usize> = pool[0..n_dev].to_vec();
    let test: Vec<usize> = pool[n_dev..n_dev + n_test].to_vec();
    let train: Vec<usize> = pool[n_dev + n_test..].to_vec();
    debug_assert_eq!(train.len(), n_train);
    Ok(SplitIndices { train, dev, test })
}

/// One direction's candidate examples before capping.
#[derive(Debug, Clone)]
pub struct DirectionExpansion {
    pub pair: DirectedPair,
    /// True when this is the reverse of the corpus's declared direction.
    pub origin_reversed: bool,
    /// True when the corpus was below the scarce threshold and both
    /// directions received all examples.
    pub scarce: bool,
    pub splits: SplitIndices,
}

/// Expand a split corpus into its two directions.
///
/// Scarcity is decided on the corpus's *total* example count. Scarce corpora
/// contribute every example to both directions; otherwise each split is
/// halved, the declared direction taking the first ⌊k/2⌋ examples and the
/// reverse the remaining ⌈k/2⌉, so the directions share no sentence pair.
pub fn expand_directions(
    corpus: &ParallelCorpus,
    config: &BuilderConfig,
    splits: &SplitIndices,
) -> (DirectionExpansion, DirectionExpansion) {
    let scarce = corpus.len() < config.scarce_threshold;
    let halve = |ids: &[usize]| -> (Vec<usize>, Vec<usize>) {
        if scarce {
            (ids.to_vec(), ids.to_vec())
        } else {
            let k = ids.len() / 2;
            (ids[..k].to_vec(), ids[k..].to_vec())
        }
    };
    let (train_f, train_r) = halve(&splits.train);
    let (dev_f, dev_r) = halve(&splits.dev);
    let (test_f, test_r) = halve(&splits.test);
    (
        DirectionExpansion {
            pair: corpus.pair.clone(),
            origin_reversed: false,
            scarce,
            splits: SplitIndices {
                train: train_f,
                dev: dev_f,
                test: test_f,
            },
        },
        DirectionExpansion {
            pair: corpus.pair.reversed(),
            origin_reversed: true,
            scarce,
            splits: SplitIndices {
                train: train_r,
                dev: dev_r,
                test: test_r,
            },
        },
    )
}

/// Keep at most `cap` examples as a uniform subset, preserving input order.
/// Inputs at or under the cap are returned unchanged.
pub fn sample_split<T: Clone>(examples: &[T], cap: usize, seed: u64) -> Vec<T> {
    if examples.len() <= cap {
        return examples.to_vec();
    }
    let mut rng = stage_rng(seed, "cap-sample", "");
    let mut keep = rand::seq::index::sample(&mut rng, examples.len(), cap).into_vec();
    keep.sort_unstable();
    keep.into_iter().map(|i| examples[i].clone()).collect()
}

/// A corpus ready for splitting: possibly the concatenation of several
/// manifest corpora, with per-sentence source attribution retained.
struct PreparedCorpus {
    corpus: ParallelCorpus,
    sentence_sources: Vec<std::sync::Arc<str>>,
}

/// Group corpora by unordered pair and apply the merge policy.
fn prepare_corpora(
    corpora: Vec<ParallelCorpus>,
    config: &BuilderConfig,
) -> Result<Vec<PreparedCorpus>, BuilderError> {
    let mut groups: BTreeMap<(String, String), Vec<ParallelCorpus>> = BTreeMap::new();
    for corpus in corpora {
        let key = if corpus.pair.src < corpus.pair.tgt {
            (corpus.pair.src.clone(), corpus.pair.tgt.clone())
        } else {
            (corpus.pair.tgt.clone(), corpus.pair.src.clone())
        };
        groups.entry(key).or_default().push(corpus);
    }

    let mut prepared = Vec::with_capacity(groups.len());
    for ((a, b), members) in groups {
        let pair_code = format!("{a}-{b}");
        if members.len() == 1 {
            let corpus = members.into_iter().next().expect("group is non-empty");
            let source: std::sync::Arc<str> = corpus.source_name.as_str().into();
            let sentence_sources = vec![source; corpus.len()];
            prepared.push(PreparedCorpus {
                corpus,
                sentence_sources,
            });
            continue;
        }
        if config.merge_policy == MergePolicy::Error {
            return Err(BuilderError::DuplicateDirection(pair_code));
        }
        if let Some(bad) = members.iter().find(|m| m.official_splits.is_some()) {
            return Err(BuilderError::MergeOfficialSplits {
                pair: pair_code,
                member: bad.source_name.clone(),
            });
        }
        let orientation = members[0].pair.clone();
        let merged_name = members
            .iter()
            .map(|m| m.source_name.as_str())
            .collect::<Vec<_>>()
            .join("+");
        let mut sentences = Vec::new();
        let mut sentence_sources = Vec::new();
        for member in &members {
            let swap = member.pair != orientation;
            let source: std::sync::Arc<str> = member.source_name.as_str().into();
            for sp in &member.pairs {
                let (src_text, tgt_text) = if swap {
                    (sp.tgt_text.clone(), sp.src_text.clone())
                } else {
                    (sp.src_text.clone(), sp.tgt_text.clone())
                };
                sentences.push(SentencePair {
                    // Prefix ids with the member name so concatenation cannot
                    // collide (corpus construction re-checks uniqueness).
                    id: format!("{}:{}", member.source_name, sp.id),
                    src_text,
                    tgt_text,
                });
                sentence_sources.push(source.clone());
            }
        }
        let tier = members[0].tier;
        let corpus = ParallelCorpus::new(orientation, merged_name, tier, sentences, None)?;
        prepared.push(PreparedCorpus {
            corpus,
            sentence_sources,
        });
    }
    Ok(prepared)
}

/// Build a benchmark from loaded corpora. See the module docs for the
/// pipeline; the result's directions are sorted by pair code.
pub fn build_benchmark(
    corpora: Vec<ParallelCorpus>,
    registry: &LanguageRegistry,
    config: &BuilderConfig,
) -> Result<BenchmarkDataset, BuilderError> {
    config.validate()?;
    let kept = filter_by_quality(corpora, config);
    if kept.is_empty() {
        return Err(BuilderError::EmptyManifest);
    }
    for corpus in &kept {
        registry.validate_language_code(&corpus.pair.src)?;
        registry.validate_language_code(&corpus.pair.tgt)?;
    }

    let mut directions: Vec<DirectionDataset> = Vec::new();
    for PreparedCorpus {
        corpus,
        sentence_sources,
    } in prepare_corpora(kept, config)?
    {
        let official = corpus.official_splits.is_some();
        let splits = split_corpus(&corpus, config)?;
        let (forward, reverse) = expand_directions(&corpus, config, &splits);
        for expansion in [forward, reverse] {
            let tgt_info = registry
                .validate_language_code(&expansion.pair.tgt)
                .expect("validated above");
            let instruction = render_instruction(tgt_info);
            let langcode = expansion.pair.code();
            let mut dataset = DirectionDataset {
                pair: expansion.pair.clone(),
                from_official_splits: official,
                train: Vec::new(),
                dev: Vec::new(),
                test: Vec::new(),
            };
            for split_name in SPLIT_NAMES {
                let candidates = expansion.splits.split(split_name);
                let chosen: Vec<usize> = if official {
                    // Official splits are published verbatim: no capping.
                    candidates.to_vec()
                } else {
                    let cap = config.caps.for_split(split_name);
                    let seed = derive_seed(config.seed, "cap", &format!("{langcode}.{split_name}"));
                    sample_split(candidates, cap, seed)
                };
                let records: Vec<ProvenancedRecord> = chosen
                    .into_iter()
                    .map(|idx| {
                        let sentence = &corpus.pairs[idx];
                        let (input, output) = if expansion.origin_reversed {
                            (sentence.tgt_text.clone(), sentence.src_text.clone())
                        } else {
                            (sentence.src_text.clone(), sentence.tgt_text.clone())
                        };
                        ProvenancedRecord {
                            record: TranslationRecord {
                                langcode: langcode.clone(),
                                instruction: instruction.clone(),
                                input,
                                output,
                            },
                            provenance: Provenance {
                                source_name: sentence_sources[idx].to_string(),
                                sentence_id: sentence.id.clone(),
                                origin_reversed: expansion.origin_reversed,
                            },
                        }
                    })
                    .collect();
                match split_name {
                    "train" => dataset.train = records,
                    "dev" => dataset.dev = records,
                    _ => dataset.test = records,
                }
            }
            directions.push(dataset);
        }
    }
    directions.sort_by_key(|d| d.pair.code());
    Ok(BenchmarkDataset {
        directions,
        config: config.clone(),
    })
}

/// Render every output file of a benchmark to (file name → contents).
/// Writing these entries to a directory *is* the on-disk format, so equal
/// maps mean byte-identical benchmarks.
pub fn benchmark_files(benchmark: &BenchmarkDataset) -> BTreeMap<String, String> {
    let mut files = BTreeMap::new();
    for direction in &benchmark.directions {
        for split_name in SPLIT_NAMES {
            let mut content = String::new();
            for pr in direction.split(split_name) {
                content.push_str(&serialize_record(&pr.record));
                content.push('\n');
            }
            files.insert(
                format!("{}.{split_name}.jsonl", direction.pair.code()),
                content,
            );
        }
    }
    files.insert(
        "stats.tsv".to_string(),
        render_stats_tsv(
            &compute_statistics(&benchmark.directions),
            &benchmark.config,
        ),
    );
    files
}

/// Render stats.tsv: `#`-prefixed metadata (seed, ratios, caps, scarce
/// threshold, tiers, totals), a column header, and one row per direction.
pub fn render_stats_tsv(stats: &BenchmarkStats, config: &BuilderConfig) -> String {
    let tiers = config
        .allowed_tiers
        .iter()
        .map(QualityTier::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let mut out = String::new();
    out.push_str("# benchmark statistics\n");
    out.push_str(&format!("# seed\t{}\n", config.seed));
    out.push_str(&format!(
        "# ratios\t{}\t{}\t{}\n",
        config.split_ratios[0], config.split_ratios[1], config.split_ratios[2]
    ));
    out.push_str(&format!(
        "# caps\t{}\t{}\t{}\n",
        config.caps.train, config.caps.dev, config.caps.test
    ));
    out.push_str(&format!(
        "# scarce_threshold\t{}\n",
        config.scarce_threshold
    ));
    out.push_str(&format!("# allowed_tiers\t{tiers}\n"));
    out.push_str(&format!("# n_directions\t{}\n", stats.n_directions));
    out.push_str(&format!("# n_languages\t{}\n", stats.n_languages));
    out.push_str(&format!(
        "# totals\t{}\t{}\t{}\n",
        stats.train_total, stats.dev_total, stats.test_total
    ));
    out.push_str("direction\ttrain\tdev\ttest\tofficial_splits\n");
    for row in &stats.per_direction {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            row.pair.code(),
            row.train,
            row.dev,
            row.test,
            row.from_official_splits
        ));
    }
    out
}

/// Write all benchmark files into `dir` (created if needed).
pub fn write_benchmark(benchmark: &BenchmarkDataset, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, content) in benchmark_files(benchmark) {
        std::fs::write(dir.join(name), content)?;
    }
    Ok(())
}

/// Check the structural invariants of a built benchmark. Used by tests and
/// by the validation pass; returns human-readable violation descriptions.
pub fn check_invariants(benchmark: &BenchmarkDataset) -> Vec<String> {
    let mut problems = Vec::new();
    let mut seen_pairs = HashSet::new();
    for direction in &benchmark.directions {
        let code = direction.pair.code();
        if !seen_pairs.insert(code.clone()) {
            problems.push(format!("direction `{code}` appears more than once"));
        }
        let mut texts: [HashSet<(&str, &str)>; 3] = Default::default();
        for (i, split_name) in SPLIT_NAMES.iter().enumerate() {
            for pr in direction.split(split_name) {
                if pr.record.langcode != code {
                    problems.push(format!(
                        "direction `{code}` has a record labelled `{}`",
                        pr.record.langcode
                    ));
                }
                texts[i].insert((pr.record.input.as_str(), pr.record.output.as_str()));
            }
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            if texts[a].intersection(&texts[b]).next().is_some() {
                problems.push(format!(
                    "direction `{code}`: {} and {} share example text",
                    SPLIT_NAMES[a], SPLIT_NAMES[b]
                ));
            }
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::corpus::OfficialSplits;

    /// A corpus of `n` distinct sentence pairs in the given direction.
    fn named_corpus(
        name: &str,
        src: &str,
        tgt: &str,
        n: usize,
        tier: QualityTier,
    ) -> ParallelCorpus {
        let pairs = (0..n)
            .map(|i| SentencePair {
                id: format!("{name}:{}", i + 1),
                src_text: format!("{name} {src} sentence {i}"),
                tgt_text: format!("{name} {tgt} sentence {i}"),
            })
            .collect();
        ParallelCorpus::new(DirectedPair::new(src, tgt), name, tier, pairs, None).unwrap()
    }

    fn toy_corpus(src: &str, tgt: &str, n: usize, tier: QualityTier) -> ParallelCorpus {
        named_corpus("toy", src, tgt, n, tier)
    }

    fn config(scarce_threshold: usize) -> BuilderConfig {
        BuilderConfig {
            scarce_threshold,
            seed: 42,
            ..BuilderConfig::default()
        }
    }

    #[test]
    fn ratio_split_sizes_follow_floor_rule() {
        let corpus = toy_corpus("eng", "hau", 100, QualityTier::Gold);
        let splits = split_corpus(&corpus, &config(0)).unwrap();
        assert_eq!(
            (splits.train.len(), splits.dev.len(), splits.test.len()),
            (80, 10, 10)
        );

        // 99 examples: floors give 79 and 9, remainder 11 goes to test.
        let corpus = toy_corpus("eng", "hau", 99, QualityTier::Gold);
        let splits = split_corpus(&corpus, &config(0)).unwrap();
        assert_eq!(
            (splits.train.len(), splits.dev.len(), splits.test.len()),
            (79, 9, 11)
        );

        // Every index appears exactly once across the three splits.
        let mut all: Vec<usize> = splits
            .train
            .iter()
            .chain(&splits.dev)
            .chain(&splits.test)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..99).collect::<Vec<_>>());
    }

    #[test]
    fn ratio_split_handles_float_artifacts() {
        // 0.3 * 10 is 2.999…96 in f64; the guard keeps the floor at 3.
        let corpus = toy_corpus("eng", "hau", 10, QualityTier::Gold);
        let cfg = BuilderConfig {
            split_ratios: [0.3, 0.3, 0.4],
            ..config(0)
        };
        let splits = split_corpus(&corpus, &cfg).unwrap();
        assert_eq!(
            (splits.train.len(), splits.dev.len(), splits.test.len()),
            (3, 3, 4)
        );
    }

    #[test]
    fn split_is_deterministic_per_seed_and_corpus() {
        let corpus = toy_corpus("eng", "hau", 50, QualityTier::Gold);
        let a = split_corpus(&corpus, &config(0)).unwrap();
        let b = split_corpus(&corpus, &config(0)).unwrap();
        assert_eq!(a, b);
        let other_seed = BuilderConfig {
            seed: 43,
            ..config(0)
        };
        let c = split_corpus(&corpus, &other_seed).unwrap();
        assert_ne!(a, c, "different seed should reshuffle");
    }

    #[test]
    fn official_splits_are_returned_verbatim() {
        let mut corpus = toy_corpus("eng", "hau", 5, QualityTier::Gold);
        corpus.official_splits = Some(OfficialSplits {
            train: vec!["toy:3".into(), "toy:1".into()],
            dev: vec!["toy:5".into()],
            test: vec!["toy:2".into(), "toy:4".into()],
        });
        let splits = split_corpus(&corpus, &config(0)).unwrap();
        assert_eq!(splits.train, vec![2, 0], "published order, not index order");
        assert_eq!(splits.dev, vec![4]);
        assert_eq!(splits.test, vec![1, 3]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let corpus = ParallelCorpus::new(
            DirectedPair::new("eng", "hau"),
            "empty",
            QualityTier::Gold,
            vec![],
            None,
        )
        .unwrap();
        assert!(matches!(
            split_corpus(&corpus, &config(0)),
            Err(BuilderError::EmptyCorpus(_))
        ));
    }

    #[test]
    fn scarce_corpora_feed_both_directions() {
        let corpus = toy_corpus("eng", "hau", 10, QualityTier::Gold);
        let splits = split_corpus(&corpus, &config(1000)).unwrap();
        let (fwd, rev) = expand_directions(&corpus, &config(1000), &splits);
        assert!(fwd.scarce && rev.scarce);
        assert_eq!(fwd.splits.train, splits.train);
        assert_eq!(rev.splits.train, splits.train);
        assert_eq!(rev.pair.code(), "hau-eng");
    }

    #[test]
    fn abundant_corpora_are_halved_disjointly() {
        let corpus = toy_corpus("eng", "hau", 11, QualityTier::Gold);
        let splits = SplitIndices {
            train: (0..7).collect(),
            dev: vec![7, 8],
            test: vec![9, 10],
        };
        let (fwd, rev) = expand_directions(&corpus, &config(5), &splits);
        assert!(!fwd.scarce);
        // Forward takes the floor half, reverse the rest.
        assert_eq!(fwd.splits.train, vec![0, 1, 2]);
        assert_eq!(rev.splits.train, vec![3, 4, 5, 6]);
        assert_eq!(fwd.splits.dev, vec![7]);
        assert_eq!(rev.splits.dev, vec![8]);
        let f: HashSet<usize> = fwd.splits.train.iter().copied().collect();
        let r: HashSet<usize> = rev.splits.train.iter().copied().collect();
        assert!(f.is_disjoint(&r));
    }

    #[test]
    fn scarcity_uses_corpus_total_not_split_size() {
        // 30 examples with threshold 25: not scarce even though each split
        // is well under 25.
        let corpus = toy_corpus("eng", "hau", 30, QualityTier::Gold);
        let splits = split_corpus(&corpus, &config(25)).unwrap();
        let (fwd, _) = expand_directions(&corpus, &config(25), &splits);
        assert!(!fwd.scarce);
        assert_eq!(fwd.splits.train.len(), 12); // ⌊24/2⌋
    }

    #[test]
    fn sample_split_is_an_order_preserving_subset() {
        let examples: Vec<usize> = (0..100).collect();
        let sampled = sample_split(&examples, 10, 7);
        assert_eq!(sampled.len(), 10);
        let mut sorted = sampled.clone();
        sorted.sort_unstable();
        assert_eq!(sampled, sorted, "input order must be preserved");
        assert_eq!(sample_split(&examples, 100, 7), examples);
        assert_eq!(sample_split(&examples, 1000, 7), examples);
        assert_eq!(
            sample_split(&examples, 10, 7),
            sample_split(&examples, 10, 7)
        );
        assert_ne!(
            sample_split(&examples, 10, 7),
            sample_split(&examples, 10, 8)
        );
    }

    #[test]
    fn instruction_template_uses_target_name() {
        let reg = bundled::registry();
        assert_eq!(
            render_instruction(reg.get("hau").unwrap()),
            "Translate the following text to Hausa language. Return only the translated \
             sentence only. Do not repeat the instruction."
        );
        assert_eq!(
            render_instruction(reg.get("ach").unwrap()),
            "Translate the following text to Acholi language. Return only the translated \
             sentence only. Do not repeat the instruction."
        );
    }

    #[test]
    fn build_produces_sorted_unique_directions_with_instructions() {
        let reg = bundled::registry();
        let corpora = vec![
            toy_corpus("hau", "eng", 40, QualityTier::Gold),
            toy_corpus("ach", "swa", 40, QualityTier::HumanEvaluated),
        ];
        let benchmark = build_benchmark(corpora, reg, &config(1000)).unwrap();
        let codes: Vec<String> = benchmark.directions.iter().map(|d| d.pair.code()).collect();
        assert_eq!(codes, ["ach-swa", "eng-hau", "hau-eng", "swa-ach"]);
        assert!(check_invariants(&benchmark).is_empty());

        let eng_hau = &benchmark.directions[1];
        let record = &eng_hau.train[0].record;
        assert_eq!(record.langcode, "eng-hau");
        assert!(record.instruction.contains("to Hausa language"));
        // hau→eng corpus reversed into eng→hau: origin is flagged.
        assert!(eng_hau.train[0].provenance.origin_reversed);
        let hau_eng = &benchmark.directions[2];
        assert!(!hau_eng.train[0].provenance.origin_reversed);
        // Scarce corpus: both directions carry all 4 dev examples.
        assert_eq!(eng_hau.dev.len(), 4);
        assert_eq!(hau_eng.dev.len(), 4);
    }

    #[test]
    fn build_respects_caps_only_for_ratio_splits() {
        let reg = bundled::registry();
        let cfg = BuilderConfig {
            caps: SplitCaps {
                train: 10,
                dev: 2,
                test: 3,
            },
            scarce_threshold: 0,
            seed: 1,
            ..BuilderConfig::default()
        };
        let benchmark = build_benchmark(
            vec![toy_corpus("eng", "hau", 200, QualityTier::Gold)],
            reg,
            &cfg,
        )
        .unwrap();
        for direction in &benchmark.directions {
            assert_eq!(direction.train.len(), 10);
            assert_eq!(direction.dev.len(), 2);
            assert_eq!(direction.test.len(), 3);
        }

        // Official splits ignore caps entirely.
        let mut corpus = toy_corpus("eng", "hau", 30, QualityTier::Gold);
        corpus.official_splits = Some(OfficialSplits {
            train: (1..=10).map(|i| format!("toy:{i}")).collect(),
            dev: (11..=22).map(|i| format!("toy:{i}")).collect(),
            test: (23..=30).map(|i| format!("toy:{i}")).collect(),
        });
        let benchmark = build_benchmark(vec![corpus], reg, &cfg).unwrap();
        let eng_hau = &benchmark.directions[0];
        assert!(eng_hau.from_official_splits);
        // Not scarce (threshold 0): halving still applies, caps do not.
        assert_eq!(eng_hau.train.len(), 5);
        assert_eq!(
            eng_hau.dev.len(),
            6,
            "official dev of 12 halves to 6, over the cap of 2"
        );
        assert_eq!(eng_hau.test.len(), 4);
    }

    #[test]
    fn build_is_byte_deterministic() {
        let reg = bundled::registry();
        let corpora = || {
            vec![
                toy_corpus("eng", "hau", 120, QualityTier::Gold),
                toy_corpus("swa", "yor", 37, QualityTier::HumanEvaluated),
            ]
        };
        let a = build_benchmark(corpora(), reg, &config(50)).unwrap();
        let b = build_benchmark(corpora(), reg, &config(50)).unwrap();
        assert_eq!(benchmark_files(&a), benchmark_files(&b));
        let c = build_benchmark(
            corpora(),
            reg,
            &BuilderConfig {
                seed: 7,
                ..config(50)
            },
        )
        .unwrap();
        assert_ne!(benchmark_files(&a), benchmark_files(&c));
    }

    #[test]
    fn quality_filter_and_empty_manifest() {
        let reg = bundled::registry();
        let corpora = vec![toy_corpus("eng", "hau", 50, QualityTier::Synthetic)];
        assert!(matches!(
            build_benchmark(corpora, reg, &config(0)),
            Err(BuilderError::EmptyManifest)
        ));

        let mixed = vec![
            toy_corpus("eng", "hau", 50, QualityTier::Synthetic),
            toy_corpus("eng", "hau", 50, QualityTier::Gold),
        ];
        let kept = filter_by_quality(mixed, &config(0));
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].tier, QualityTier::Gold);
    }

    #[test]
    fn duplicate_directions_merge_or_error_by_policy() {
        let reg = bundled::registry();
        let two = || {
            vec![
                named_corpus("alpha", "eng", "hau", 30, QualityTier::Gold),
                // Same unordered pair, declared in the opposite direction.
                named_corpus("beta", "hau", "eng", 20, QualityTier::Gold),
            ]
        };
        let strict = BuilderConfig {
            merge_policy: MergePolicy::Error,
            ..config(1000)
        };
        assert!(matches!(
            build_benchmark(two(), reg, &strict),
            Err(BuilderError::DuplicateDirection(_))
        ));

        let merged = build_benchmark(two(), reg, &config(1000)).unwrap();
        assert_eq!(merged.directions.len(), 2);
        let total: usize = merged
            .directions
            .iter()
            .map(|d| d.train.len() + d.dev.len() + d.test.len())
            .sum();
        // 50 merged examples, scarce, so both directions carry all 50.
        assert_eq!(total, 100);
        // Provenance names the actual member corpus. The train split holds
        // 40 of the 50 merged examples, so both members must appear.
        let sources: HashSet<String> = merged.directions[0]
            .train
            .iter()
            .map(|r| r.provenance.source_name.clone())
            .collect();
        assert_eq!(
            sources,
            HashSet::from(["alpha".to_string(), "beta".to_string()])
        );
    }

    #[test]
    fn merging_official_split_corpora_is_refused() {
        let reg = bundled::registry();
        let mut official = toy_corpus("eng", "hau", 10, QualityTier::Gold);
        official.official_splits = Some(OfficialSplits {
            train: (1..=8).map(|i| format!("toy:{i}")).collect(),
            dev: vec!["toy:9".into()],
            test: vec!["toy:10".into()],
        });
        let corpora = vec![official, toy_corpus("hau", "eng", 10, QualityTier::Gold)];
        assert!(matches!(
            build_benchmark(corpora, reg, &config(0)),
            Err(BuilderError::MergeOfficialSplits { .. })
        ));
    }

    #[test]
    fn config_validation_rejects_bad_ratios_and_caps() {
        let mut cfg = BuilderConfig {
            split_ratios: [0.5, 0.5, 0.5],
            ..BuilderConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(BuilderError::BadConfig(_))));
        cfg.split_ratios = [1.1, -0.05, -0.05];
        assert!(matches!(cfg.validate(), Err(BuilderError::BadConfig(_))));
        cfg = BuilderConfig::default();
        cfg.caps.dev = 0;
        assert!(matches!(cfg.validate(), Err(BuilderError::BadConfig(_))));
        cfg = BuilderConfig::default();
        cfg.allowed_tiers.clear();
        assert!(matches!(cfg.validate(), Err(BuilderError::BadConfig(_))));
        assert!(BuilderConfig::default().validate().is_ok());
    }

    #[test]
    fn statistics_aggregate_counts_and_languages() {
        let reg = bundled::registry();
        let benchmark = build_benchmark(
            vec![toy_corpus("eng", "hau", 15, QualityTier::Gold)],
            reg,
            &config(1000),
        )
        .unwrap();
        let stats = compute_statistics(&benchmark.directions);
        assert_eq!(stats.n_directions, 2);
        assert_eq!(stats.n_languages, 2);
        // 15 → 12/1/2 by ratio; scarce, so each direction gets all of each split.
        assert_eq!(stats.train_total, 24);
        assert_eq!(stats.dev_total, 2);
        assert_eq!(stats.test_total, 4);
        assert_eq!(stats.per_direction.len(), 2);
        assert_eq!(stats.per_direction[0].pair.code(), "eng-hau");
    }

    #[test]
    fn stats_tsv_round_trip_shape() {
        let reg = bundled::registry();
        let benchmark = build_benchmark(
            vec![toy_corpus("eng", "hau", 15, QualityTier::Gold)],
            reg,
            &config(1000),
        )
        .unwrap();
        let files = benchmark_files(&benchmark);
        assert!(files.contains_key("eng-hau.train.jsonl"));
        assert!(files.contains_key("hau-eng.test.jsonl"));
        assert_eq!(files.len(), 7, "2 directions × 3 splits + stats.tsv");
        let stats = &files["stats.tsv"];
        assert!(stats.contains("# seed\t42"));
        assert!(stats.contains("direction\ttrain\tdev\ttest\tofficial_splits"));
        assert!(stats.contains("eng-hau\t12\t1\t2\tfalse"));
    }
}
