//! Parallel corpora as loaded from disk, before any benchmark processing.
//!
//! A corpus is an ordered list of sentence pairs in a declared direction,
//! tagged with a quality tier and (optionally) official train/dev/test
//! splits published by the original source. Three input formats are
//! supported:
//!
//! * `tsv` — one `source<TAB>target` pair per line;
//! * `moses` — two aligned plain-text files `{path}.{src}` / `{path}.{tgt}`;
//! * `jsonl` — one `{"src": ..., "tgt": ...}` object per line.
//!
//! For corpora with official splits, `path` acts as a prefix and the loader
//! reads one file (or Moses file pair) per split: `{path}.train.tsv`,
//! `{path}.dev.tsv`, `{path}.test.tsv`, and likewise `.jsonl` or
//! `.{split}.{src}`/`.{split}.{tgt}`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::registry::DirectedPair;

/// Errors from corpus loading and construction.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(
        "aligned files disagree: `{src_path}` has {src_lines} lines, `{tgt_path}` has {tgt_lines}"
    )]
    LineCountMismatch {
        src_path: String,
        tgt_path: String,
        src_lines: usize,
        tgt_lines: usize,
    },
    #[error("`{path}` line {line}: empty segment")]
    EmptySegment { path: String, line: usize },
    #[error("`{path}` line {line}: {message}")]
    MalformedLine {
        path: String,
        line: usize,
        message: String,
    },
    #[error("duplicate sentence id `{0}`")]
    DuplicateId(String),
    #[error("sentence `{id}` has an empty side")]
    EmptyText { id: String },
    #[error("invalid official splits: {0}")]
    BadOfficialSplits(String),
    #[error("unknown corpus format `{0}` (expected tsv, moses, or jsonl)")]
    UnknownFormat(String),
    #[error("unknown quality tier `{0}` (expected synthetic, human-evaluated, gold, or unknown)")]
    UnknownTier(String),
}

/// Provenance quality of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QualityTier {
    /// Machine-generated translations with no human pass.
    Synthetic,
    /// Human-translated or human-verified.
    HumanEvaluated,
    /// Professionally curated evaluation data.
    Gold,
    /// No reliable provenance information.
    Unknown,
}

impl FromStr for QualityTier {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        match s {
            "synthetic" => Ok(QualityTier::Synthetic),
            "human" | "human-evaluated" | "human_evaluated" => Ok(QualityTier::HumanEvaluated),
            "gold" => Ok(QualityTier::Gold),
            "unknown" => Ok(QualityTier::Unknown),
            other => Err(CorpusError::UnknownTier(other.to_string())),
        }
    }
}

impl fmt::Display for QualityTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QualityTier::Synthetic => "synthetic",
            QualityTier::HumanEvaluated => "human-evaluated",
            QualityTier::Gold => "gold",
            QualityTier::Unknown => "unknown",
        })
    }
}

/// Supported input file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Tsv,
    Moses,
    Jsonl,
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        match s {
            "tsv" => Ok(CorpusFormat::Tsv),
            "moses" => Ok(CorpusFormat::Moses),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

/// One aligned sentence pair. `id` is unique within a corpus and stable
/// across runs; loaders use `{source_name}:{line}` (or
/// `{source_name}:{split}:{line}` under official splits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub id: String,
    pub src_text: String,
    pub tgt_text: String,
}

/// Official splits as published by a source: each sentence id appears in
/// exactly one of the three lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OfficialSplits {
    pub train: Vec<String>,
    pub dev: Vec<String>,
    pub test: Vec<String>,
}

/// A loaded corpus in its declared direction.
#[derive(Debug, Clone)]
pub struct ParallelCorpus {
    /// Direction the pairs are stored in (`src_text` is `pair.src`).
    pub pair: DirectedPair,
    /// Short name of the originating collection, used in provenance ids.
    pub source_name: String,
    pub tier: QualityTier,
    pub pairs: Vec<SentencePair>,
    pub official_splits: Option<OfficialSplits>,
}

impl ParallelCorpus {
    /// Construct with validation: ids unique, texts non-empty, and official
    /// splits (when present) an exact partition of the ids.
    pub fn new(
        pair: DirectedPair,
        source_name: impl Into<String>,
        tier: QualityTier,
        pairs: Vec<SentencePair>,
        official_splits: Option<OfficialSplits>,
    ) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for sp in &pairs {
            if sp.src_text.is_empty() || sp.tgt_text.is_empty() {
                return Err(CorpusError::EmptyText { id: sp.id.clone() });
            }
            if !seen.insert(sp.id.as_str()) {
                return Err(CorpusError::DuplicateId(sp.id.clone()));
            }
        }
        if let Some(splits) = &official_splits {
            let mut assigned = HashSet::new();
            let total = splits.train.len() + splits.dev.len() + splits.test.len();
            for id in splits.train.iter().chain(&splits.dev).chain(&splits.test) {
                if !seen.contains(id.as_str()) {
                    return Err(CorpusError::BadOfficialSplits(format!(
                        "split references unknown id `{id}`"
                    )));
                }
                if !assigned.insert(id.as_str()) {
                    return Err(CorpusError::BadOfficialSplits(format!(
                        "id `{id}` assigned to more than one split"
                    )));
                }
            }
            if total != pairs.len() {
                return Err(CorpusError::BadOfficialSplits(format!(
                    "splits cover {total} of {} sentences",
                    pairs.len()
                )));
            }
        }
        Ok(ParallelCorpus {
            pair,
            source_name: source_name.into(),
            tier,
            pairs,
            official_splits,
        })
    }

    /// Total sentence pairs across all (potential) splits.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn read_file(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parse one on-disk representation into (src, tgt) text rows.
fn parse_rows(path: &Path, format: CorpusFormat) -> Result<Vec<(String, String)>, CorpusError> {
    let display = path.display().to_string();
    let mut rows = Vec::new();
    match format {
        CorpusFormat::Tsv => {
            for (idx, line) in read_file(path)?.lines().enumerate() {
                let line = line.trim_end_matches('\r');
                let (src, tgt) =
                    line.split_once('\t')
                        .ok_or_else(|| CorpusError::MalformedLine {
                            path: display.clone(),
                            line: idx + 1,
                            message: "expected two tab-separated columns".to_string(),
                        })?;
                rows.push((src.to_string(), tgt.to_string()));
            }
        }
        CorpusFormat::Jsonl => {
            for (idx, line) in read_file(path)?.lines().enumerate() {
                let value: serde_json::Value =
                    serde_json::from_str(line).map_err(|e| CorpusError::MalformedLine {
                        path: display.clone(),
                        line: idx + 1,
                        message: format!("malformed JSON: {e}"),
                    })?;
                let malformed = |message: String| CorpusError::MalformedLine {
                    path: display.clone(),
                    line: idx + 1,
                    message,
                };
                let obj = value
                    .as_object()
                    .ok_or_else(|| malformed("expected a JSON object".to_string()))?;
                for key in obj.keys() {
                    if key != "src" && key != "tgt" {
                        return Err(malformed(format!("unexpected field `{key}`")));
                    }
                }
                let side = |name: &str| -> Result<String, CorpusError> {
                    obj.get(name)
                        .and_then(|v| v.as_str())
                        .map(str::to_string)
                        .ok_or_else(|| malformed(format!("missing string field `{name}`")))
                };
                rows.push((side("src")?, side("tgt")?));
            }
        }
        CorpusFormat::Moses => unreachable!("moses is handled by parse_moses_rows"),
    }
    Ok(rows)
}

/// Read an aligned Moses file pair `{prefix}.{src}` / `{prefix}.{tgt}`.
fn parse_moses_rows(
    prefix: &Path,
    pair: &DirectedPair,
) -> Result<Vec<(String, String)>, CorpusError> {
    let src_path = prefix.with_extension_appended(&pair.src);
    let tgt_path = prefix.with_extension_appended(&pair.tgt);
    let src_text = read_file(&src_path)?;
    let tgt_text = read_file(&tgt_path)?;
    let src_lines: Vec<&str> = src_text.lines().collect();
    let tgt_lines: Vec<&str> = tgt_text.lines().collect();
    if src_lines.len() != tgt_lines.len() {
        return Err(CorpusError::LineCountMismatch {
            src_path: src_path.display().to_string(),
            tgt_path: tgt_path.display().to_string(),
            src_lines: src_lines.len(),
            tgt_lines: tgt_lines.len(),
        });
    }
    Ok(src_lines
        .into_iter()
        .zip(tgt_lines)
        .map(|(s, t)| {
            (
                s.trim_end_matches('\r').to_string(),
                t.trim_end_matches('\r').to_string(),
            )
        })
        .collect())
}

trait PathExt {
    fn with_extension_appended(&self, ext: &str) -> std::path::PathBuf;
}

impl PathExt for Path {
    /// `Path::with_extension` replaces an existing extension; corpus
    /// prefixes like `data/foo.v2` need the suffix appended instead.
    fn with_extension_appended(&self, ext: &str) -> std::path::PathBuf {
        let mut os = self.as_os_str().to_owned();
        os.push(".");
        os.push(ext);
        std::path::PathBuf::from(os)
    }
}

/// Trim and validate raw rows into sentence pairs. `id_prefix` is
/// `{source_name}` or `{source_name}:{split}`; line numbers are 1-based.
fn rows_to_pairs(
    rows: Vec<(String, String)>,
    id_prefix: &str,
    path_for_errors: &str,
) -> Result<Vec<SentencePair>, CorpusError> {
    let mut pairs = Vec::with_capacity(rows.len());
    for (idx, (src, tgt)) in rows.into_iter().enumerate() {
        let src = src.trim().to_string();
        let tgt = tgt.trim().to_string();
        if src.is_empty() || tgt.is_empty() {
            return Err(CorpusError::EmptySegment {
                path: path_for_errors.to_string(),
                line: idx + 1,
            });
        }
        pairs.push(SentencePair {
            id: format!("{id_prefix}:{}", idx + 1),
            src_text: src,
            tgt_text: tgt,
        });
    }
    Ok(pairs)
}

/// Load a corpus from disk.
///
/// Without official splits, `path` names the file itself (or the Moses
/// prefix). With `official_splits` set, `path` is a prefix and one file (or
/// Moses pair) per split is read; the published split assignment is recorded
/// so the benchmark builder can return it verbatim.
pub fn load_parallel_corpus(
    path: &Path,
    format: CorpusFormat,
    pair: DirectedPair,
    tier: QualityTier,
    source_name: &str,
    official_splits: bool,
) -> Result<ParallelCorpus, CorpusError> {
    if !official_splits {
        let rows = match format {
            CorpusFormat::Moses => parse_moses_rows(path, &pair)?,
            _ => parse_rows(path, format)?,
        };
        let pairs = rows_to_pairs(rows, source_name, &path.display().to_string())?;
        return ParallelCorpus::new(pair, source_name, tier, pairs, None);
    }

    let mut pairs = Vec::new();
    let mut splits = OfficialSplits::default();
    for split in ["train", "dev", "test"] {
        let split_prefix = path.with_extension_appended(split);
        let (rows, error_path) = match format {
            CorpusFormat::Tsv => {
                let p = split_prefix.with_extension_appended("tsv");
                (parse_rows(&p, format)?, p.display().to_string())
            }
            CorpusFormat::Jsonl => {
                let p = split_prefix.with_extension_appended("jsonl");
                (parse_rows(&p, format)?, p.display().to_string())
            }
            CorpusFormat::Moses => (
                parse_moses_rows(&split_prefix, &pair)?,
                split_prefix.display().to_string(),
            ),
        };
        let split_pairs = rows_to_pairs(rows, &format!("{source_name}:{split}"), &error_path)?;
        let ids: Vec<String> = split_pairs.iter().map(|p| p.id.clone()).collect();
        match split {
            "train" => splits.train = ids,
            "dev" => splits.dev = ids,
            _ => splits.test = ids,
        }
        pairs.extend(split_pairs);
    }
    ParallelCorpus::new(pair, source_name, tier, pairs, Some(splits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn dir() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    fn write(path: &Path, content: &str) {
        let mut f = std::fs::File::create(path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
    }

    #[test]
    fn loads_tsv() {
        let d = dir();
        let p = d.path().join("toy.tsv");
        write(&p, "hello world\tsannu duniya\n  spaced \t also spaced \n");
        let corpus = load_parallel_corpus(
            &p,
            CorpusFormat::Tsv,
            DirectedPair::new("eng", "hau"),
            QualityTier::Gold,
            "toy",
            false,
        )
        .unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.pairs[0].id, "toy:1");
        assert_eq!(corpus.pairs[0].src_text, "hello world");
        // Leading and trailing whitespace is trimmed, inner kept.
        assert_eq!(corpus.pairs[1].src_text, "spaced");
        assert_eq!(corpus.pairs[1].tgt_text, "also spaced");
        assert!(corpus.official_splits.is_none());
    }

    #[test]
    fn tsv_empty_target_reports_line() {
        let d = dir();
        let p = d.path().join("toy.tsv");
        write(&p, "a\tb\nc\t\n");
        let err = load_parallel_corpus(
            &p,
            CorpusFormat::Tsv,
            DirectedPair::new("eng", "hau"),
            QualityTier::Gold,
            "toy",
            false,
        )
        .unwrap_err();
        assert!(
            matches!(err, CorpusError::EmptySegment { line: 2, .. }),
            "{err}"
        );
    }

    #[test]
    fn tsv_missing_column_is_malformed() {
        let d = dir();
        let p = d.path().join("toy.tsv");
        write(&p, "only source text\n");
        let err = load_parallel_corpus(
            &p,
            CorpusFormat::Tsv,
            DirectedPair::new("eng", "hau"),
            QualityTier::Gold,
            "toy",
            false,
        )
        .unwrap_err();
        assert!(
            matches!(err, CorpusError::MalformedLine { line: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn loads_moses_and_checks_alignment() {
        let d = dir();
        write(&d.path().join("bible.eng"), "one\ntwo\n");
        write(&d.path().join("bible.hau"), "daya\nbiyu\n");
        let corpus = load_parallel_corpus(
            &d.path().join("bible"),
            CorpusFormat::Moses,
            DirectedPair::new("eng", "hau"),
            QualityTier::HumanEvaluated,
            "bible",
            false,
        )
        .unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.pairs[1].tgt_text, "biyu");

        write(&d.path().join("bible.hau"), "daya\n");
        let err = load_parallel_corpus(
            &d.path().join("bible"),
            CorpusFormat::Moses,
            DirectedPair::new("eng", "hau"),
            QualityTier::HumanEvaluated,
            "bible",
            false,
        )
        .unwrap_err();
        assert!(
            matches!(
                err,
                CorpusError::LineCountMismatch {
                    src_lines: 2,
                    tgt_lines: 1,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn loads_jsonl_and_rejects_extras() {
        let d = dir();
        let p = d.path().join("toy.jsonl");
        write(
            &p,
            "{\"src\":\"a\",\"tgt\":\"b\"}\n{\"src\":\"c\",\"tgt\":\"d\"}\n",
        );
        let corpus = load_parallel_corpus(
            &p,
            CorpusFormat::Jsonl,
            DirectedPair::new("eng", "hau"),
            QualityTier::Gold,
            "toy",
            false,
        )
        .unwrap();
        assert_eq!(corpus.len(), 2);

        write(&p, "{\"src\":\"a\",\"tgt\":\"b\",\"note\":\"x\"}\n");
        let err = load_parallel_corpus(
            &p,
            CorpusFormat::Jsonl,
            DirectedPair::new("eng", "hau"),
            QualityTier::Gold,
            "toy",
            false,
        )
        .unwrap_err();
        assert!(
            matches!(err, CorpusError::MalformedLine { line: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn loads_official_splits_as_partition() {
        let d = dir();
        write(&d.path().join("flores.train.tsv"), "a\tb\nc\td\ne\tf\n");
        write(&d.path().join("flores.dev.tsv"), "g\th\n");
        write(&d.path().join("flores.test.tsv"), "i\tj\nk\tl\n");
        let corpus = load_parallel_corpus(
            &d.path().join("flores"),
            CorpusFormat::Tsv,
            DirectedPair::new("eng", "hau"),
            QualityTier::Gold,
            "flores",
            true,
        )
        .unwrap();
        assert_eq!(corpus.len(), 6);
        let splits = corpus.official_splits.as_ref().unwrap();
        assert_eq!(splits.train.len(), 3);
        assert_eq!(splits.dev, vec!["flores:dev:1".to_string()]);
        assert_eq!(splits.test.len(), 2);
    }

    #[test]
    fn construction_rejects_duplicate_ids_and_bad_splits() {
        let sp = |id: &str| SentencePair {
            id: id.to_string(),
            src_text: "x".to_string(),
            tgt_text: "y".to_string(),
        };
        let err = ParallelCorpus::new(
            DirectedPair::new("eng", "hau"),
            "s",
            QualityTier::Gold,
            vec![sp("a"), sp("a")],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId(_)));

        let err = ParallelCorpus::new(
            DirectedPair::new("eng", "hau"),
            "s",
            QualityTier::Gold,
            vec![sp("a"), sp("b")],
            Some(OfficialSplits {
                train: vec!["a".to_string()],
                dev: vec![],
                test: vec![],
            }),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::BadOfficialSplits(_)));
    }

    #[test]
    fn tier_and_format_parsing() {
        assert_eq!("gold".parse::<QualityTier>().unwrap(), QualityTier::Gold);
        assert_eq!(
            "human".parse::<QualityTier>().unwrap(),
            QualityTier::HumanEvaluated
        );
        assert_eq!(QualityTier::HumanEvaluated.to_string(), "human-evaluated");
        assert!("shiny".parse::<QualityTier>().is_err());
        assert_eq!(
            "moses".parse::<CorpusFormat>().unwrap(),
            CorpusFormat::Moses
        );
        assert!("csv".parse::<CorpusFormat>().is_err());
    }
}
