//! Scoring translation system outputs against a benchmark and aggregating
//! the per-direction scores into category-level reports.
//!
//! A *run* is a directory of `{src}-{tgt}.hyp` files (one hypothesis per
//! line, aligned with the benchmark split's record order) plus an optional
//! `run.tsv` with `system_name`. Scoring computes, per direction, word-level
//! BLEU, subword BLEU when a subword model is supplied, and ChrF++.
//! Aggregation averages directions into a fixed table of category rows —
//! anchor-language blocks, the African↔African row, and supported /
//! unsupported totals — either unweighted (every direction counts equally)
//! or weighted by segment count.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{
    chrf_pp, corpus_bleu, sp_bleu, BleuConfig, BleuScore, ChrfConfig, ChrfScore, MetricError,
    Tokenization,
};
use crate::registry::{
    parse_pair_code, Anchor, CategoryLabel, DirectedPair, LanguageRegistry, RegistryError,
};
use crate::subword::SubwordModel;
use crate::validate::LoadedBenchmark;

/// Errors from run loading, scoring, and aggregation.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("`{0}` does not follow the `src-tgt.hyp` naming scheme")]
    BadFileName(String),
    #[error("`{dir}` contains no .hyp files")]
    EmptyRun { dir: String },
    #[error("run has hypotheses for `{0}` but the benchmark has no such direction")]
    MissingDirection(String),
    #[error("direction `{pair}` has no `{split}` records to score against")]
    MissingSplit { pair: String, split: String },
    #[error("direction `{pair}`: {hypotheses} hypotheses but {references} references")]
    LineCountMismatch {
        pair: String,
        hypotheses: usize,
        references: usize,
    },
    #[error("unknown split `{0}` (expected train, dev, or test)")]
    UnknownSplit(String),
    #[error("unknown report format `{0}` (expected tsv, json, or markdown)")]
    UnknownFormat(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

/// One system's hypotheses, keyed by direction code.
#[derive(Debug, Clone)]
pub struct SystemRun {
    pub system_name: String,
    pub hypotheses: BTreeMap<String, Vec<String>>,
}

/// Load a run directory. The system name comes from `run.tsv`
/// (`system_name<TAB>name`) when present, otherwise from the directory name.
pub fn load_run(dir: &Path) -> Result<SystemRun, HarnessError> {
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source: std::io::Error| HarnessError::Io {
            path: path.clone(),
            source,
        }
    };
    let mut hypotheses = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let Some(code) = name.strip_suffix(".hyp") else {
            continue;
        };
        parse_pair_code(code).map_err(|_| HarnessError::BadFileName(name.clone()))?;
        let text = std::fs::read_to_string(entry.path()).map_err(io_err(&entry.path()))?;
        let lines: Vec<String> = text
            .lines()
            .map(|l| l.trim_end_matches('\r').to_string())
            .collect();
        hypotheses.insert(code.to_string(), lines);
    }
    if hypotheses.is_empty() {
        return Err(HarnessError::EmptyRun {
            dir: dir.display().to_string(),
        });
    }

    let mut system_name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed-run".to_string());
    let meta_path = dir.join("run.tsv");
    if meta_path.exists() {
        let text = std::fs::read_to_string(&meta_path).map_err(io_err(&meta_path))?;
        for line in text.lines() {
            if let Some(("system_name", value)) = line.split_once('\t') {
                system_name = value.trim().to_string();
            }
        }
    }
    Ok(SystemRun {
        system_name,
        hypotheses,
    })
}

/// Metric scores for one direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub pair: DirectedPair,
    pub split: String,
    pub n_segments: usize,
    pub bleu: BleuScore,
    pub spbleu: Option<BleuScore>,
    pub chrf: ChrfScore,
}

/// All per-direction scores for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunScores {
    pub system_name: String,
    pub split: String,
    pub scores: Vec<PairScore>,
}

/// Score a run against one split of a benchmark.
///
/// `bleu_config` drives both BLEU variants: word BLEU forces
/// whitespace-punctuation tokenization, and subword BLEU (computed only when
/// `model` is given) forces subword tokenization; smoothing and lowercasing
/// apply to both.
pub fn score_run(
    run: &SystemRun,
    benchmark: &LoadedBenchmark,
    split: &str,
    bleu_config: &BleuConfig,
    chrf_config: &ChrfConfig,
    model: Option<&SubwordModel>,
) -> Result<RunScores, HarnessError> {
    if !crate::builder::SPLIT_NAMES.contains(&split) {
        return Err(HarnessError::UnknownSplit(split.to_string()));
    }
    let mut scores = Vec::new();
    for (code, hyps) in &run.hypotheses {
        let pair = parse_pair_code(code)?;
        let direction = benchmark
            .direction(&pair)
            .ok_or_else(|| HarnessError::MissingDirection(code.clone()))?;
        let references: Vec<&str> = direction
            .split(split)
            .iter()
            .map(|r| r.output.as_str())
            .collect();
        if references.is_empty() {
            return Err(HarnessError::MissingSplit {
                pair: code.clone(),
                split: split.to_string(),
            });
        }
        if hyps.len() != references.len() {
            return Err(HarnessError::LineCountMismatch {
                pair: code.clone(),
                hypotheses: hyps.len(),
                references: references.len(),
            });
        }

        let word_config = BleuConfig {
            tokenization: Tokenization::WhitespacePunct,
            ..*bleu_config
        };
        let bleu = corpus_bleu(hyps, &references, &word_config)?;
        let spbleu = match model {
            Some(model) => {
                let subword_config = BleuConfig {
                    tokenization: Tokenization::Subword,
                    ..*bleu_config
                };
                Some(sp_bleu(hyps, &references, model, &subword_config)?)
            }
            None => None,
        };
        let chrf = chrf_pp(hyps, &references, chrf_config)?;
        scores.push(PairScore {
            pair,
            split: split.to_string(),
            n_segments: references.len(),
            bleu,
            spbleu,
            chrf,
        });
    }
    Ok(RunScores {
        system_name: run.system_name.clone(),
        split: split.to_string(),
        scores,
    })
}

/// A row key in the category report: a direction category or one of the
/// two totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CategoryKey {
    Label(CategoryLabel),
    TotalSupported,
    TotalUnsupported,
}

impl std::fmt::Display for CategoryKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CategoryKey::Label(label) => write!(f, "{label}"),
            CategoryKey::TotalSupported => write!(f, "Total (supported)"),
            CategoryKey::TotalUnsupported => write!(f, "Total (not supported)"),
        }
    }
}

impl Serialize for CategoryKey {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The fixed report row order: one block per anchor (both directions, into,
/// from, from-unsupported, from-supported), then African↔African, then the
/// supported/unsupported totals.
pub fn report_row_order() -> Vec<CategoryKey> {
    let mut rows = Vec::new();
    for anchor in Anchor::ALL {
        rows.push(CategoryKey::Label(CategoryLabel::AnchorBoth(anchor)));
        rows.push(CategoryKey::Label(CategoryLabel::IntoAnchor(anchor)));
        rows.push(CategoryKey::Label(CategoryLabel::FromAnchor(anchor)));
        rows.push(CategoryKey::Label(CategoryLabel::FromAnchorUnsupported(
            anchor,
        )));
        rows.push(CategoryKey::Label(CategoryLabel::FromAnchorSupported(
            anchor,
        )));
    }
    rows.push(CategoryKey::Label(CategoryLabel::AfricanAfrican));
    rows.push(CategoryKey::TotalSupported);
    rows.push(CategoryKey::TotalUnsupported);
    rows
}

/// One aggregated report row. Metric fields are `None` when the category
/// has no directions (rendered as `NA`), or — for subword BLEU — when no
/// member direction carried a subword score.
#[derive(Debug, Clone, Serialize)]
pub struct CategoryRow {
    pub key: CategoryKey,
    pub n_directions: usize,
    pub n_segments: usize,
    pub bleu: Option<f64>,
    pub spbleu: Option<f64>,
    pub chrf: Option<f64>,
}

/// The aggregated category table.
#[derive(Debug, Clone, Serialize)]
pub struct CategoryReport {
    pub system_name: String,
    pub split: String,
    pub set_name: String,
    /// True when averages are weighted by segment count.
    pub weighted: bool,
    pub rows: Vec<CategoryRow>,
}

#[derive(Default)]
struct Accumulator {
    n_directions: usize,
    n_segments: usize,
    weight: f64,
    bleu: f64,
    chrf: f64,
    sp_weight: f64,
    spbleu: f64,
}

impl Accumulator {
    fn add(&mut self, score: &PairScore, weighted: bool) {
        let w = if weighted {
            score.n_segments as f64
        } else {
            1.0
        };
        self.n_directions += 1;
        self.n_segments += score.n_segments;
        self.weight += w;
        self.bleu += w * score.bleu.score;
        self.chrf += w * score.chrf.score;
        if let Some(sp) = &score.spbleu {
            self.sp_weight += w;
            self.spbleu += w * sp.score;
        }
    }

    fn row(&self, key: CategoryKey) -> CategoryRow {
        let mean = |sum: f64, weight: f64| (weight > 0.0).then(|| sum / weight);
        CategoryRow {
            key,
            n_directions: self.n_directions,
            n_segments: self.n_segments,
            bleu: mean(self.bleu, self.weight),
            spbleu: mean(self.spbleu, self.sp_weight),
            chrf: mean(self.chrf, self.weight),
        }
    }
}

/// Aggregate per-direction scores into the fixed category table. Each
/// direction contributes to every category row it belongs to, and to
/// exactly one of the two total rows.
pub fn aggregate_categories(
    scores: &RunScores,
    registry: &LanguageRegistry,
    set_name: &str,
    weighted: bool,
) -> Result<CategoryReport, HarnessError> {
    let mut accumulators: BTreeMap<CategoryKey, Accumulator> = BTreeMap::new();
    for score in &scores.scores {
        let labels = registry.categorize_pair(&score.pair, set_name)?;
        for label in labels {
            accumulators
                .entry(CategoryKey::Label(label))
                .or_default()
                .add(score, weighted);
        }
        let total_key = if registry.direction_supported(&score.pair, set_name)? {
            CategoryKey::TotalSupported
        } else {
            CategoryKey::TotalUnsupported
        };
        accumulators
            .entry(total_key)
            .or_default()
            .add(score, weighted);
    }

    let rows = report_row_order()
        .into_iter()
        .map(|key| {
            accumulators
                .get(&key)
                .map(|acc| acc.row(key))
                .unwrap_or_else(|| Accumulator::default().row(key))
        })
        .collect();
    Ok(CategoryReport {
        system_name: scores.system_name.clone(),
        split: scores.split.clone(),
        set_name: set_name.to_string(),
        weighted,
        rows,
    })
}

/// Output formats for [`render_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Tsv,
    Json,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "tsv" => Ok(ReportFormat::Tsv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(HarnessError::UnknownFormat(other.to_string())),
        }
    }
}

fn fmt_metric(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.2}"),
        None => "NA".to_string(),
    }
}

/// Render a category report. TSV and Markdown round scores to two decimals;
/// JSON keeps full precision.
pub fn render_report(report: &CategoryReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Tsv => {
            let mut out = String::new();
            out.push_str(&format!("# system\t{}\n", report.system_name));
            out.push_str(&format!("# split\t{}\n", report.split));
            out.push_str(&format!("# set\t{}\n", report.set_name));
            out.push_str(&format!(
                "# averaging\t{}\n",
                if report.weighted {
                    "segment-weighted"
                } else {
                    "unweighted"
                }
            ));
            out.push_str("category\tn_directions\tbleu\tspbleu\tchrf\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    row.key,
                    row.n_directions,
                    fmt_metric(row.bleu),
                    fmt_metric(row.spbleu),
                    fmt_metric(row.chrf),
                ));
            }
            out
        }
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serialization cannot fail")
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            out.push_str(&format!(
                "**System:** {} · **Split:** {} · **Set:** {} · **Averaging:** {}\n\n",
                report.system_name,
                report.split,
                report.set_name,
                if report.weighted {
                    "segment-weighted"
                } else {
                    "unweighted"
                }
            ));
            out.push_str("| Category | Directions | BLEU | spBLEU | ChrF++ |\n");
            out.push_str("|---|---:|---:|---:|---:|\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    row.key,
                    row.n_directions,
                    fmt_metric(row.bleu),
                    fmt_metric(row.spbleu),
                    fmt_metric(row.chrf),
                ));
            }
            out
        }
    }
}
