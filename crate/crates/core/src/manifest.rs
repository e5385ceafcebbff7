//! Manifest files: the tab-separated list of corpora a benchmark is built
//! from.
//!
//! A manifest has one row per corpus with seven columns:
//!
//! ```text
//! source_name  path  format  src  tgt  tier  official_splits
//! ```
//!
//! `format` is `tsv`, `moses`, or `jsonl`; `tier` is `synthetic`,
//! `human-evaluated`, `gold`, or `unknown`; `official_splits` is `true` or
//! `false`. Lines starting with `#` and blank lines are skipped, and an
//! optional header row (first cell literally `source_name`) is tolerated so
//! manifests can be self-documenting. Relative paths are resolved against
//! the manifest's own directory, keeping manifests relocatable.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{load_parallel_corpus, CorpusError, CorpusFormat, ParallelCorpus, QualityTier};
use crate::registry::{DirectedPair, RegistryError};

/// Errors from manifest parsing and corpus loading.
#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("manifest names source `{0}` more than once")]
    DuplicateSourceName(String),
    #[error("manifest has no corpus rows")]
    Empty,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

/// One manifest row: where a corpus lives and how to read it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    pub source_name: String,
    pub path: PathBuf,
    pub format: CorpusFormat,
    pub pair: DirectedPair,
    pub tier: QualityTier,
    pub official_splits: bool,
}

/// Parse manifest text. Row order is preserved: it decides merge
/// orientation downstream.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>, ManifestError> {
    let mut rows = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields[0] == "source_name" {
            continue; // header row
        }
        if fields.len() != 7 {
            return Err(ManifestError::Malformed {
                line: line_no,
                message: format!("expected 7 tab-separated columns, got {}", fields.len()),
            });
        }
        if fields.iter().any(|f| f.is_empty()) {
            return Err(ManifestError::Malformed {
                line: line_no,
                message: "empty column".to_string(),
            });
        }
        let malformed = |message: String| ManifestError::Malformed {
            line: line_no,
            message,
        };
        let pair = crate::registry::parse_pair_code(&format!("{}-{}", fields[3], fields[4]))
            .map_err(|e| malformed(e.to_string()))?;
        let row = ManifestRow {
            source_name: fields[0].to_string(),
            path: PathBuf::from(fields[1]),
            format: CorpusFormat::from_str(fields[2]).map_err(|e| malformed(e.to_string()))?,
            pair,
            tier: QualityTier::from_str(fields[5]).map_err(|e| malformed(e.to_string()))?,
            official_splits: match fields[6] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(malformed(format!(
                        "official_splits must be `true` or `false`, got `{other}`"
                    )))
                }
            },
        };
        if !seen.insert(row.source_name.clone()) {
            return Err(ManifestError::DuplicateSourceName(row.source_name));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ManifestError::Empty);
    }
    Ok(rows)
}

/// Read and parse a manifest file.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestRow>, ManifestError> {
    let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_manifest(&text)
}

/// Load every corpus a manifest names. Relative corpus paths resolve
/// against `base_dir` (normally the manifest's directory).
pub fn load_manifest_corpora(
    rows: &[ManifestRow],
    base_dir: &Path,
) -> Result<Vec<ParallelCorpus>, ManifestError> {
    rows.iter()
        .map(|row| {
            let path = if row.path.is_absolute() {
                row.path.clone()
            } else {
                base_dir.join(&row.path)
            };
            load_parallel_corpus(
                &path,
                row.format,
                row.pair.clone(),
                row.tier,
                &row.source_name,
                row.official_splits,
            )
            .map_err(ManifestError::from)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const GOOD: &str = "\
# corpora for the smoke benchmark
source_name\tpath\tformat\tsrc\ttgt\ttier\tofficial_splits
lexicon-a\tdata/a.tsv\ttsv\teng\thau\tgold\tfalse
web-b\tdata/b\tmoses\tswa\tyor\thuman-evaluated\ttrue
gen-c\t/abs/c.jsonl\tjsonl\tamh\tmlg\tsynthetic\tfalse
";

    #[test]
    fn parses_rows_and_preserves_order() {
        let rows = parse_manifest(GOOD).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].source_name, "lexicon-a");
        assert_eq!(rows[0].format, CorpusFormat::Tsv);
        assert_eq!(rows[0].pair.code(), "eng-hau");
        assert_eq!(rows[0].tier, QualityTier::Gold);
        assert!(!rows[0].official_splits);
        assert!(rows[1].official_splits);
        assert_eq!(rows[2].path, PathBuf::from("/abs/c.jsonl"));
    }

    #[test]
    fn rejects_malformed_rows() {
        let err = parse_manifest("a\tb\tc\n").unwrap_err();
        assert!(matches!(err, ManifestError::Malformed { line: 1, .. }));

        let err = parse_manifest("x\tp\ttsv\teng\teng\tgold\tfalse\n").unwrap_err();
        assert!(
            matches!(err, ManifestError::Malformed { .. }),
            "same-language pair"
        );

        let err = parse_manifest("x\tp\tcsv\teng\thau\tgold\tfalse\n").unwrap_err();
        assert!(
            matches!(err, ManifestError::Malformed { .. }),
            "unknown format"
        );

        let err = parse_manifest("x\tp\ttsv\teng\thau\tbronze\tfalse\n").unwrap_err();
        assert!(
            matches!(err, ManifestError::Malformed { .. }),
            "unknown tier"
        );

        let err = parse_manifest("x\tp\ttsv\teng\thau\tgold\tyes\n").unwrap_err();
        assert!(
            matches!(err, ManifestError::Malformed { .. }),
            "non-boolean flag"
        );

        assert!(matches!(
            parse_manifest("# only comments\n"),
            Err(ManifestError::Empty)
        ));

        let dup = "x\tp\ttsv\teng\thau\tgold\tfalse\nx\tq\ttsv\tswa\tyor\tgold\tfalse\n";
        assert!(matches!(
            parse_manifest(dup),
            Err(ManifestError::DuplicateSourceName(_))
        ));
    }

    #[test]
    fn loads_corpora_relative_to_base_dir() {
        let dir = tempfile::tempdir().unwrap();
        let data = dir.path().join("data");
        std::fs::create_dir(&data).unwrap();
        let mut f = std::fs::File::create(data.join("tiny.tsv")).unwrap();
        writeln!(f, "good morning\tbarka da safiya").unwrap();
        writeln!(f, "thank you\tna gode").unwrap();
        drop(f);

        let manifest = "tiny\tdata/tiny.tsv\ttsv\teng\thau\tgold\tfalse\n";
        let rows = parse_manifest(manifest).unwrap();
        let corpora = load_manifest_corpora(&rows, dir.path()).unwrap();
        assert_eq!(corpora.len(), 1);
        assert_eq!(corpora[0].len(), 2);
        assert_eq!(corpora[0].pairs[0].src_text, "good morning");
        assert_eq!(corpora[0].pairs[1].id, "tiny:2");

        // Missing file surfaces as an I/O error naming the resolved path.
        let rows = parse_manifest("gone\tdata/missing.tsv\ttsv\teng\thau\tgold\tfalse\n").unwrap();
        let err = load_manifest_corpora(&rows, dir.path()).unwrap_err();
        assert!(matches!(err, ManifestError::Corpus(CorpusError::Io { .. })));
    }
}
