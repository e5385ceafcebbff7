//! `mteval train-tokenizer`: monolingual sources in, subword model out.
//!
//! The sources manifest is a TSV with one `lang<TAB>path` row per language;
//! blank lines, `#` comments, and an optional `lang`-headed header row are
//! skipped, and relative paths resolve against the manifest's directory.
//! Line counts are taken from the files themselves.

use std::path::Path;

use serde_json::json;

use mteval_core::subword::{
    compute_sampling_weights, sample_training_corpus, train_bpe, MonolingualSource, DEFAULT_ALPHA,
};

use crate::context::{tool_version, write_audit, CliError, Context};
use crate::TrainTokenizerArgs;

const DEFAULT_VOCAB_SIZE: usize = 250_000;

fn load_sources(manifest: &Path) -> Result<Vec<MonolingualSource>, CliError> {
    let text = std::fs::read_to_string(manifest)
        .map_err(|e| CliError::Data(format!("cannot read `{}`: {e}", manifest.display())))?;
    let base_dir = manifest.parent().unwrap_or_else(|| Path::new("."));
    let mut sources = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields[0] == "lang" {
            continue; // header row
        }
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(CliError::Data(format!(
                "`{}` line {}: expected `lang<TAB>path`",
                manifest.display(),
                idx + 1
            )));
        }
        let path = Path::new(fields[1]);
        let path = if path.is_absolute() {
            path.to_path_buf()
        } else {
            base_dir.join(path)
        };
        sources.push(MonolingualSource::from_file(fields[0], path)?);
    }
    if sources.is_empty() {
        return Err(CliError::Data(format!(
            "`{}` names no monolingual sources",
            manifest.display()
        )));
    }
    Ok(sources)
}

pub fn cmd(ctx: &Context, args: TrainTokenizerArgs) -> Result<(), CliError> {
    let alpha = args.alpha.or(ctx.config.alpha).unwrap_or(DEFAULT_ALPHA);
    let vocab_size = args
        .vocab_size
        .or(ctx.config.vocab_size)
        .unwrap_or(DEFAULT_VOCAB_SIZE);
    let seed = args.seed.or(ctx.config.seed).unwrap_or(0);

    let sources = load_sources(&args.manifest)?;
    let total_lines: usize = sources.iter().map(|s| s.n_lines).sum();
    let budget = args.budget.or(ctx.config.budget).unwrap_or(total_lines);

    let weights = compute_sampling_weights(&sources, alpha)?;
    eprintln!(
        "sampling {budget} lines from {} sources ({total_lines} lines total)",
        sources.len()
    );
    let lines = sample_training_corpus(&sources, &weights, budget, seed)?;
    let model = train_bpe(&lines, vocab_size)?.with_alpha(alpha)?;
    model.save(&args.out)?;

    let source_rows: Vec<serde_json::Value> = sources
        .iter()
        .zip(weights.shares.iter().zip(&weights.weights))
        .map(|(source, (share, weight))| {
            json!({
                "lang": source.lang,
                "path": source.path.display().to_string(),
                "n_lines": source.n_lines,
                "share": share,
                "weight": weight,
            })
        })
        .collect();
    let audit = json!({
        "tool": tool_version(),
        "command": "train-tokenizer",
        "manifest": args.manifest.display().to_string(),
        "effective_config": {
            "alpha": alpha,
            "vocab_size": vocab_size,
            "budget": budget,
            "seed": seed,
        },
        "sources": source_rows,
        "result": {
            "vocab": model.vocab().len(),
            "merges": model.merges().len(),
            "alphabet": model.alphabet().len(),
            "checksum": model.checksum(),
        },
    });
    let mut audit_path = args.out.clone().into_os_string();
    audit_path.push(".audit.json");
    write_audit(Path::new(&audit_path), &audit)?;

    eprintln!(
        "trained {} pieces ({} merges) -> `{}`",
        model.vocab().len(),
        model.merges().len(),
        args.out.display()
    );
    println!(
        "vocab\t{}\nmerges\t{}\nchecksum\t{}",
        model.vocab().len(),
        model.merges().len(),
        model.checksum()
    );
    Ok(())
}
