//! Data bundled into the library: the language registry, the reference
//! per-direction counts, and a manifest of placeholder corpora that
//! reproduces those counts exactly.
//!
//! The reference table records, for each of the 156 translation directions,
//! how many train/dev/test examples the benchmark is expected to contain.
//! [`reference_manifest_corpora`] turns that table back into input corpora:
//! one official-split corpus per unordered language pair, sized so that the
//! builder's direction expansion lands on the published counts:
//!
//! * pairs whose two directions have identical counts and a per-direction
//!   total under the scarce threshold get a corpus of exactly that size —
//!   scarce expansion then copies every example to both directions;
//! * all other pairs get a corpus whose split sizes are the *sum* of the
//!   two directions' counts — halving then gives the declared (`a<b`)
//!   direction ⌊k/2⌋ and the reverse ⌈k/2⌉, which matches the table.
//!
//! The sentence texts are deterministic placeholders: the manifest
//! reproduces the benchmark's *shape* (directions, splits, counts, record
//! format) for testing and pipeline validation, not its prose.

use std::sync::OnceLock;

use crate::builder::DirectionCounts;
use crate::corpus::{OfficialSplits, ParallelCorpus, QualityTier, SentencePair};
use crate::registry::{DirectedPair, LanguageRegistry};

/// Name of the bundled metric-support language set.
pub const SPBLEU_SUPPORTED_SET: &str = "spbleu101_supported";

/// Expected train/dev/test totals summed over all reference directions.
pub const REFERENCE_TOTALS: [u64; 3] = [586_261, 7_437, 26_875];

/// Corpora below this many total examples are scarce under the default
/// builder configuration; the bundled manifest is shaped around it.
pub const DEFAULT_SCARCE_THRESHOLD: usize = 1000;

/// The bundled language registry: 46 languages and the
/// [`SPBLEU_SUPPORTED_SET`] membership set.
pub fn registry() -> &'static LanguageRegistry {
    static REGISTRY: OnceLock<LanguageRegistry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        LanguageRegistry::parse(
            include_str!("../data/registry.tsv"),
            Some(include_str!("../data/sets.tsv")),
        )
        .expect("bundled registry data is valid")
    })
}

/// The reference per-direction counts, sorted by direction code. Every
/// direction here comes from an official-split corpus in the bundled
/// manifest, so `from_official_splits` is always true.
pub fn reference_counts() -> &'static [DirectionCounts] {
    static COUNTS: OnceLock<Vec<DirectionCounts>> = OnceLock::new();
    COUNTS.get_or_init(|| {
        let mut rows = Vec::new();
        for (idx, raw) in include_str!("../data/counts.tsv").lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let mut next = || {
                fields
                    .next()
                    .unwrap_or_else(|| panic!("bundled counts line {}: too few columns", idx + 1))
            };
            let pair = crate::registry::parse_pair_code(next())
                .expect("bundled counts pair codes are valid");
            let parse = |s: &str| {
                s.parse::<usize>()
                    .unwrap_or_else(|_| panic!("bundled counts line {}: bad number", idx + 1))
            };
            rows.push(DirectionCounts {
                pair,
                train: parse(next()),
                dev: parse(next()),
                test: parse(next()),
                from_official_splits: true,
            });
        }
        debug_assert!(rows.windows(2).all(|w| w[0].pair.code() < w[1].pair.code()));
        rows
    })
}

/// Look up a reference row by direction.
pub fn reference_count(pair: &DirectedPair) -> Option<&'static DirectionCounts> {
    reference_counts().iter().find(|c| &c.pair == pair)
}

/// Build the placeholder corpora described in the module docs. Each corpus
/// is named `ref-{a}-{b}` (codes in lexicographic order), carries the
/// [`QualityTier::Gold`] tier, and declares official splits so the builder
/// publishes it verbatim.
pub fn reference_manifest_corpora() -> Vec<ParallelCorpus> {
    let counts = reference_counts();
    let by_code: std::collections::BTreeMap<String, &DirectionCounts> =
        counts.iter().map(|c| (c.pair.code(), c)).collect();

    let mut corpora = Vec::new();
    for forward in counts {
        let (a, b) = (&forward.pair.src, &forward.pair.tgt);
        if a > b {
            continue; // handled from the canonical orientation
        }
        let reverse = by_code
            .get(&forward.pair.reversed().code())
            .expect("reference table lists both directions of every pair");

        let per_direction_totals_equal = forward.train == reverse.train
            && forward.dev == reverse.dev
            && forward.test == reverse.test;
        let scarce = per_direction_totals_equal && forward.total() < DEFAULT_SCARCE_THRESHOLD;

        let split_size = |split: &str| {
            if scarce {
                forward.split(split)
            } else {
                forward.split(split) + reverse.split(split)
            }
        };

        let source_name = format!("ref-{a}-{b}");
        let mut pairs = Vec::new();
        let mut splits = OfficialSplits::default();
        for split in crate::builder::SPLIT_NAMES {
            let ids: Vec<String> = (0..split_size(split))
                .map(|i| {
                    let id = format!("{source_name}:{split}:{}", i + 1);
                    pairs.push(SentencePair {
                        id: id.clone(),
                        src_text: format!("{a} text {split} {}", i + 1),
                        tgt_text: format!("{b} text {split} {}", i + 1),
                    });
                    id
                })
                .collect();
            match split {
                "train" => splits.train = ids,
                "dev" => splits.dev = ids,
                _ => splits.test = ids,
            }
        }
        corpora.push(
            ParallelCorpus::new(
                forward.pair.clone(),
                source_name,
                QualityTier::Gold,
                pairs,
                Some(splits),
            )
            .expect("bundled manifest corpora are well-formed"),
        );
    }
    corpora
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shape() {
        let reg = registry();
        assert_eq!(reg.len(), 46);
        let set = reg.set(SPBLEU_SUPPORTED_SET).unwrap();
        assert_eq!(set.len(), 23);
    }

    #[test]
    fn reference_counts_shape_and_totals() {
        let counts = reference_counts();
        assert_eq!(counts.len(), 156);
        let totals = [
            counts.iter().map(|c| c.train as u64).sum::<u64>(),
            counts.iter().map(|c| c.dev as u64).sum::<u64>(),
            counts.iter().map(|c| c.test as u64).sum::<u64>(),
        ];
        assert_eq!(totals, REFERENCE_TOTALS);

        // Every direction's reverse is present.
        for c in counts {
            assert!(
                reference_count(&c.pair.reversed()).is_some(),
                "missing reverse of {}",
                c.pair
            );
        }
    }

    #[test]
    fn manifest_covers_every_unordered_pair_once() {
        let corpora = reference_manifest_corpora();
        assert_eq!(corpora.len(), 78);
        for corpus in &corpora {
            assert!(corpus.pair.src < corpus.pair.tgt, "canonical orientation");
            assert!(corpus.official_splits.is_some());
            assert_eq!(corpus.tier, QualityTier::Gold);
            let splits = corpus.official_splits.as_ref().unwrap();
            assert_eq!(
                splits.train.len() + splits.dev.len() + splits.test.len(),
                corpus.len()
            );
        }
    }

    #[test]
    fn manifest_sizes_match_expansion_arithmetic() {
        let corpora = reference_manifest_corpora();
        for corpus in &corpora {
            let fwd = reference_count(&corpus.pair).unwrap();
            let rev = reference_count(&corpus.pair.reversed()).unwrap();
            let splits = corpus.official_splits.as_ref().unwrap();
            if corpus.len() < DEFAULT_SCARCE_THRESHOLD {
                // Scarce: both directions will receive every example.
                assert_eq!(splits.train.len(), fwd.train);
                assert_eq!(fwd.train, rev.train);
                assert_eq!(fwd.dev, rev.dev);
                assert_eq!(fwd.test, rev.test);
            } else {
                for (len, f, r) in [
                    (splits.train.len(), fwd.train, rev.train),
                    (splits.dev.len(), fwd.dev, rev.dev),
                    (splits.test.len(), fwd.test, rev.test),
                ] {
                    assert_eq!(len, f + r);
                    assert_eq!(f, len / 2, "declared direction takes the floor half");
                }
            }
        }
    }
}
