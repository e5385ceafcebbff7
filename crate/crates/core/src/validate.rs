//! Loading built benchmarks back from disk and checking their invariants.
//!
//! Validation is deliberately independent of construction: it re-derives
//! everything from the files alone (`{src}-{tgt}.{split}.jsonl` plus
//! `stats.tsv`), so a benchmark that was hand-edited, truncated, or built by
//! another tool is judged on what is actually on disk. Each invariant is one
//! named check that passes, fails, or is skipped when its inputs are absent;
//! optional comparisons against reference counts report totals verbatim so
//! discrepancies are visible rather than silently rounded away.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::builder::{render_instruction, BenchmarkStats, DirectionCounts, SplitCaps, SPLIT_NAMES};
use crate::record::{parse_record, TranslationRecord};
use crate::registry::{parse_pair_code, DirectedPair, LanguageRegistry};

/// Errors from loading a benchmark directory.
#[derive(Debug, Error)]
pub enum ValidateError {
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("`{0}` does not follow the `src-tgt.split.jsonl` naming scheme")]
    BadFileName(String),
    #[error("`{dir}` contains no benchmark record files")]
    NoDirections { dir: String },
    #[error("stats.tsv line {line}: {message}")]
    MalformedStats { line: usize, message: String },
}

/// Metadata parsed from the `#` header lines of stats.tsv. Fields are
/// optional so older or hand-written files still validate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsMeta {
    pub seed: Option<u64>,
    pub ratios: Option<[f64; 3]>,
    pub caps: Option<SplitCaps>,
    pub scarce_threshold: Option<usize>,
    pub allowed_tiers: Option<String>,
    pub totals: Option<[u64; 3]>,
}

/// A parsed stats.tsv: header metadata plus one row per direction.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsFile {
    pub meta: StatsMeta,
    pub rows: Vec<DirectionCounts>,
}

/// Parse stats.tsv text. Unknown `#` lines are comments; the column header
/// for the per-direction rows is required.
pub fn parse_stats_tsv(text: &str) -> Result<StatsFile, ValidateError> {
    const HEADER: &str = "direction\ttrain\tdev\ttest\tofficial_splits";
    let mut meta = StatsMeta::default();
    let mut rows = Vec::new();
    let mut saw_header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fail = |message: String| ValidateError::MalformedStats {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix('#') {
            let fields: Vec<&str> = rest.trim().split('\t').collect();
            let nums = |want: usize| -> Result<Vec<&str>, ValidateError> {
                if fields.len() != want + 1 {
                    return Err(fail(format!(
                        "`{}` expects {want} value(s), got {}",
                        fields[0],
                        fields.len() - 1
                    )));
                }
                Ok(fields[1..].to_vec())
            };
            match fields[0] {
                "seed" => {
                    let v = nums(1)?;
                    meta.seed = Some(v[0].parse().map_err(|_| fail("bad seed".to_string()))?);
                }
                "ratios" => {
                    let v = nums(3)?;
                    let mut out = [0.0; 3];
                    for (slot, s) in out.iter_mut().zip(&v) {
                        *slot = s.parse().map_err(|_| fail("bad ratio".to_string()))?;
                    }
                    meta.ratios = Some(out);
                }
                "caps" => {
                    let v = nums(3)?;
                    let parse =
                        |s: &str| s.parse::<usize>().map_err(|_| fail("bad cap".to_string()));
                    meta.caps = Some(SplitCaps {
                        train: parse(v[0])?,
                        dev: parse(v[1])?,
                        test: parse(v[2])?,
                    });
                }
                "scarce_threshold" => {
                    let v = nums(1)?;
                    meta.scarce_threshold = Some(
                        v[0].parse()
                            .map_err(|_| fail("bad threshold".to_string()))?,
                    );
                }
                "allowed_tiers" => {
                    let v = nums(1)?;
                    meta.allowed_tiers = Some(v[0].to_string());
                }
                "totals" => {
                    let v = nums(3)?;
                    let mut out = [0u64; 3];
                    for (slot, s) in out.iter_mut().zip(&v) {
                        *slot = s.parse().map_err(|_| fail("bad total".to_string()))?;
                    }
                    meta.totals = Some(out);
                }
                _ => {} // free-form comment
            }
            continue;
        }
        if line == HEADER {
            saw_header = true;
            continue;
        }
        if !saw_header {
            return Err(fail(format!("expected header `{HEADER}` before rows")));
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(fail(format!("expected 5 columns, got {}", fields.len())));
        }
        let pair = parse_pair_code(fields[0]).map_err(|e| fail(e.to_string()))?;
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| fail("bad count".to_string()))
        };
        let official = match fields[4] {
            "true" => true,
            "false" => false,
            other => return Err(fail(format!("bad official_splits flag `{other}`"))),
        };
        rows.push(DirectionCounts {
            pair,
            train: parse(fields[1])?,
            dev: parse(fields[2])?,
            test: parse(fields[3])?,
            from_official_splits: official,
        });
    }
    if !saw_header {
        return Err(ValidateError::MalformedStats {
            line: text.lines().count() + 1,
            message: "missing per-direction header row".to_string(),
        });
    }
    Ok(StatsFile { meta, rows })
}

/// One direction as read back from disk.
#[derive(Debug, Clone)]
pub struct LoadedDirection {
    pub pair: DirectedPair,
    pub train: Vec<TranslationRecord>,
    pub dev: Vec<TranslationRecord>,
    pub test: Vec<TranslationRecord>,
    /// Which of the three split files were present.
    pub present: [bool; 3],
    /// Human-readable descriptions of records that failed to parse
    /// (`file:line: message`). Unparseable records are excluded from the
    /// split vectors.
    pub parse_errors: Vec<String>,
}

impl LoadedDirection {
    pub fn split(&self, name: &str) -> &[TranslationRecord] {
        match name {
            "train" => &self.train,
            "dev" => &self.dev,
            "test" => &self.test,
            other => unreachable!("unknown split `{other}`"),
        }
    }
}

/// A benchmark directory read back into memory.
#[derive(Debug, Clone)]
pub struct LoadedBenchmark {
    pub dir: PathBuf,
    /// Sorted by direction code.
    pub directions: Vec<LoadedDirection>,
    pub stats: Option<StatsFile>,
    /// Set when stats.tsv exists but does not parse.
    pub stats_error: Option<String>,
}

impl LoadedBenchmark {
    pub fn direction(&self, pair: &DirectedPair) -> Option<&LoadedDirection> {
        self.directions.iter().find(|d| &d.pair == pair)
    }
}

/// Read a benchmark directory: every `src-tgt.split.jsonl` plus stats.tsv.
///
/// Malformed *records* are collected per direction for validation to
/// report; malformed *file names* and I/O failures are hard errors.
pub fn load_benchmark(dir: &Path) -> Result<LoadedBenchmark, ValidateError> {
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source: std::io::Error| ValidateError::Io {
            path: path.clone(),
            source,
        }
    };
    let mut split_files: BTreeMap<String, BTreeMap<&'static str, PathBuf>> = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let Some(stem) = name.strip_suffix(".jsonl") else {
            continue;
        };
        let Some((code, split)) = stem.rsplit_once('.') else {
            return Err(ValidateError::BadFileName(name));
        };
        let Some(split) = SPLIT_NAMES.iter().find(|s| **s == split) else {
            return Err(ValidateError::BadFileName(name));
        };
        if parse_pair_code(code).is_err() {
            return Err(ValidateError::BadFileName(name));
        }
        split_files
            .entry(code.to_string())
            .or_default()
            .insert(split, entry.path());
    }
    if split_files.is_empty() {
        return Err(ValidateError::NoDirections {
            dir: dir.display().to_string(),
        });
    }

    let mut directions = Vec::with_capacity(split_files.len());
    for (code, files) in split_files {
        let pair = parse_pair_code(&code).expect("checked above");
        let mut direction = LoadedDirection {
            pair,
            train: Vec::new(),
            dev: Vec::new(),
            test: Vec::new(),
            present: [false; 3],
            parse_errors: Vec::new(),
        };
        for (i, split) in SPLIT_NAMES.iter().enumerate() {
            let Some(path) = files.get(split) else {
                continue;
            };
            direction.present[i] = true;
            let text = std::fs::read_to_string(path).map_err(io_err(path))?;
            let mut records = Vec::new();
            for (idx, line) in text.lines().enumerate() {
                match parse_record(line) {
                    Ok(record) => records.push(record),
                    Err(e) => {
                        direction
                            .parse_errors
                            .push(format!("{}:{}: {e}", path.display(), idx + 1))
                    }
                }
            }
            match i {
                0 => direction.train = records,
                1 => direction.dev = records,
                _ => direction.test = records,
            }
        }
        directions.push(direction);
    }

    let stats_path = dir.join("stats.tsv");
    let (stats, stats_error) = if stats_path.exists() {
        let text = std::fs::read_to_string(&stats_path).map_err(io_err(&stats_path))?;
        match parse_stats_tsv(&text) {
            Ok(parsed) => (Some(parsed), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };

    Ok(LoadedBenchmark {
        dir: dir.to_path_buf(),
        directions,
        stats,
        stats_error,
    })
}

/// Outcome of one validation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check's inputs were absent (e.g. no stats.tsv to compare with).
    Skip,
}

impl std::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skip => "SKIP",
        })
    }
}

/// One named validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub details: String,
}

/// Full validation outcome: the checks, free-form findings, and the
/// benchmark's actual statistics.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub findings: Vec<String>,
    pub stats: BenchmarkStats,
}

impl ValidationReport {
    /// True when no check failed (skips do not fail a benchmark).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// One line per check, then findings, then a verdict line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&format!("{} {}", check.status, check.name));
            if !check.details.is_empty() {
                out.push_str(&format!(" — {}", check.details));
            }
            out.push('\n');
        }
        for finding in &self.findings {
            out.push_str(&format!("note: {finding}\n"));
        }
        out.push_str(&format!(
            "{}: {} directions, {} languages, {}/{}/{} train/dev/test records\n",
            if self.passed() { "valid" } else { "INVALID" },
            self.stats.n_directions,
            self.stats.n_languages,
            self.stats.train_total,
            self.stats.dev_total,
            self.stats.test_total,
        ));
        out
    }
}

/// Optional comparisons for [`validate_benchmark`].
#[derive(Debug, Clone, Default)]
pub struct ValidateOptions {
    /// Compare per-direction counts against this table (a failing check).
    pub reference_counts: Option<Vec<DirectionCounts>>,
    /// Report the difference from these totals as a finding (never fails).
    pub expected_totals: Option<[u64; 3]>,
}

/// Cap how many individual problems a check's details enumerate.
fn summarize(problems: &[String]) -> String {
    const SHOW: usize = 4;
    let shown: Vec<&str> = problems.iter().take(SHOW).map(String::as_str).collect();
    let mut text = shown.join("; ");
    let hidden = problems.len().saturating_sub(SHOW);
    if hidden > 0 {
        text.push_str(&format!("; … and {hidden} more"));
    }
    text
}

fn check(checks: &mut Vec<CheckResult>, name: &'static str, problems: Vec<String>) {
    checks.push(CheckResult {
        name,
        status: if problems.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        details: summarize(&problems),
    });
}

fn skip(checks: &mut Vec<CheckResult>, name: &'static str, reason: &str) {
    checks.push(CheckResult {
        name,
        status: CheckStatus::Skip,
        details: reason.to_string(),
    });
}

/// Run every invariant check against a loaded benchmark.
pub fn validate_benchmark(
    loaded: &LoadedBenchmark,
    registry: &LanguageRegistry,
    options: &ValidateOptions,
) -> ValidationReport {
    let mut checks = Vec::new();
    let mut findings = Vec::new();

    // stats.tsv parse health first: later checks depend on it.
    match (&loaded.stats, &loaded.stats_error) {
        (_, Some(err)) => check(&mut checks, "stats-parse", vec![err.clone()]),
        (Some(_), None) => check(&mut checks, "stats-parse", vec![]),
        (None, None) => skip(&mut checks, "stats-parse", "no stats.tsv"),
    }

    let mut problems = Vec::new();
    for d in &loaded.directions {
        for (i, split) in SPLIT_NAMES.iter().enumerate() {
            if !d.present[i] {
                problems.push(format!("{} is missing its {split} file", d.pair));
            }
        }
    }
    check(&mut checks, "split-files-present", problems);

    let mut problems = Vec::new();
    for d in &loaded.directions {
        problems.extend(d.parse_errors.iter().cloned());
    }
    check(&mut checks, "record-format", problems);

    let mut problems = Vec::new();
    for d in &loaded.directions {
        let code = d.pair.code();
        for split in SPLIT_NAMES {
            for (idx, record) in d.split(split).iter().enumerate() {
                if record.langcode != code {
                    problems.push(format!(
                        "{code}.{split} record {}: langcode `{}`",
                        idx + 1,
                        record.langcode
                    ));
                }
            }
        }
    }
    check(&mut checks, "langcode-matches-filename", problems);

    let mut problems = Vec::new();
    for d in &loaded.directions {
        if let Err(e) = registry.validate_pair(&d.pair.code()) {
            problems.push(e.to_string());
        }
    }
    check(&mut checks, "registry-membership", problems);

    let mut problems = Vec::new();
    for d in &loaded.directions {
        let Ok(tgt) = registry.validate_language_code(&d.pair.tgt) else {
            continue; // reported by registry-membership
        };
        let expected = render_instruction(tgt);
        for split in SPLIT_NAMES {
            for (idx, record) in d.split(split).iter().enumerate() {
                if record.instruction != expected {
                    problems.push(format!(
                        "{}.{split} record {}: unexpected instruction text",
                        d.pair,
                        idx + 1
                    ));
                }
            }
        }
    }
    check(&mut checks, "instruction-template", problems);

    let mut problems = Vec::new();
    for d in &loaded.directions {
        let mut texts: [HashSet<(&str, &str)>; 3] = Default::default();
        for (i, split) in SPLIT_NAMES.iter().enumerate() {
            for record in d.split(split) {
                texts[i].insert((record.input.as_str(), record.output.as_str()));
            }
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let shared = texts[a].intersection(&texts[b]).count();
            if shared > 0 {
                problems.push(format!(
                    "{}: {} and {} share {shared} example(s)",
                    d.pair, SPLIT_NAMES[a], SPLIT_NAMES[b]
                ));
            }
        }
    }
    check(&mut checks, "cross-split-disjoint", problems);

    // Actual counts, with official flags borrowed from stats.tsv when known.
    let official_flags: BTreeMap<String, bool> = loaded
        .stats
        .iter()
        .flat_map(|s| &s.rows)
        .map(|r| (r.pair.code(), r.from_official_splits))
        .collect();
    let actual: Vec<DirectionCounts> = loaded
        .directions
        .iter()
        .map(|d| DirectionCounts {
            pair: d.pair.clone(),
            train: d.train.len(),
            dev: d.dev.len(),
            test: d.test.len(),
            from_official_splits: official_flags.get(&d.pair.code()).copied().unwrap_or(false),
        })
        .collect();

    match &loaded.stats {
        Some(stats) => {
            let mut problems = Vec::new();
            if let Some(caps) = &stats.meta.caps {
                for row in &actual {
                    if row.from_official_splits {
                        continue; // official splits legitimately exceed caps
                    }
                    for split in SPLIT_NAMES {
                        let (n, cap) = (row.split(split), caps.for_split(split));
                        if n > cap {
                            problems.push(format!(
                                "{}.{split} has {n} records, cap is {cap}",
                                row.pair
                            ));
                        }
                    }
                }
                check(&mut checks, "split-caps", problems);
            } else {
                skip(&mut checks, "split-caps", "stats.tsv has no caps metadata");
            }

            let mut problems = Vec::new();
            let actual_by_code: BTreeMap<String, &DirectionCounts> =
                actual.iter().map(|c| (c.pair.code(), c)).collect();
            for row in &stats.rows {
                match actual_by_code.get(&row.pair.code()) {
                    None => problems.push(format!("stats row {} has no files", row.pair)),
                    Some(a) => {
                        for split in SPLIT_NAMES {
                            if a.split(split) != row.split(split) {
                                problems.push(format!(
                                    "{}.{split}: stats say {}, files have {}",
                                    row.pair,
                                    row.split(split),
                                    a.split(split)
                                ));
                            }
                        }
                    }
                }
            }
            let listed: HashSet<String> = stats.rows.iter().map(|r| r.pair.code()).collect();
            for a in &actual {
                if !listed.contains(&a.pair.code()) {
                    problems.push(format!("{} missing from stats.tsv", a.pair));
                }
            }
            if let Some(totals) = stats.meta.totals {
                let sums = [
                    actual.iter().map(|c| c.train as u64).sum::<u64>(),
                    actual.iter().map(|c| c.dev as u64).sum::<u64>(),
                    actual.iter().map(|c| c.test as u64).sum::<u64>(),
                ];
                if sums != totals {
                    problems.push(format!(
                        "totals line says {totals:?}, files sum to {sums:?}"
                    ));
                }
            }
            check(&mut checks, "stats-agreement", problems);
        }
        None => {
            skip(&mut checks, "split-caps", "no stats.tsv");
            skip(&mut checks, "stats-agreement", "no stats.tsv");
        }
    }

    if let Some(reference) = &options.reference_counts {
        let mut problems = Vec::new();
        let actual_by_code: BTreeMap<String, &DirectionCounts> =
            actual.iter().map(|c| (c.pair.code(), c)).collect();
        for row in reference {
            match actual_by_code.get(&row.pair.code()) {
                None => problems.push(format!("reference direction {} absent", row.pair)),
                Some(a) => {
                    for split in SPLIT_NAMES {
                        if a.split(split) != row.split(split) {
                            problems.push(format!(
                                "{}.{split}: reference {}, actual {}",
                                row.pair,
                                row.split(split),
                                a.split(split)
                            ));
                        }
                    }
                }
            }
        }
        let referenced: HashSet<String> = reference.iter().map(|r| r.pair.code()).collect();
        for a in &actual {
            if !referenced.contains(&a.pair.code()) {
                problems.push(format!("{} not in the reference table", a.pair));
            }
        }
        check(&mut checks, "reference-counts", problems);
    }

    let stats = BenchmarkStats::from_counts(actual);
    if let Some(expected) = options.expected_totals {
        let sums = [stats.train_total, stats.dev_total, stats.test_total];
        let delta: Vec<i64> = sums
            .iter()
            .zip(expected)
            .map(|(&a, e)| a as i64 - e as i64)
            .collect();
        findings.push(format!(
            "train/dev/test totals: actual {sums:?}, expected {expected:?}, \
             difference {delta:?}"
        ));
    }

    ValidationReport {
        checks,
        findings,
        stats,
    }
}
