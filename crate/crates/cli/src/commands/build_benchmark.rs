//! `mteval build-benchmark`: manifest in, benchmark directory out.

use serde_json::json;

use mteval_core::builder::compute_statistics;
use mteval_core::manifest::{load_manifest, load_manifest_corpora};
use mteval_core::{build_benchmark, write_benchmark, BuilderConfig};

use crate::context::{parse_caps, parse_ratios, parse_tiers, tool_version, write_audit};
use crate::context::{CliError, Context};
use crate::BuildBenchmarkArgs;

pub fn cmd(ctx: &Context, args: BuildBenchmarkArgs) -> Result<(), CliError> {
    let defaults = BuilderConfig::default();
    let config = BuilderConfig {
        seed: args.seed.or(ctx.config.seed).unwrap_or(defaults.seed),
        caps: match args.caps.as_deref().or(ctx.config.caps.as_deref()) {
            Some(text) => parse_caps(text)?,
            None => defaults.caps,
        },
        split_ratios: match args.ratios.as_deref().or(ctx.config.ratios.as_deref()) {
            Some(text) => parse_ratios(text)?,
            None => defaults.split_ratios,
        },
        allowed_tiers: match args.tiers.as_deref().or(ctx.config.tiers.as_deref()) {
            Some(text) => parse_tiers(text)?,
            None => defaults.allowed_tiers,
        },
        scarce_threshold: args
            .scarce_threshold
            .or(ctx.config.scarce_threshold)
            .unwrap_or(defaults.scarce_threshold),
        ..defaults
    };

    let rows = load_manifest(&args.manifest)?;
    let base_dir = args
        .manifest
        .parent()
        .unwrap_or_else(|| std::path::Path::new("."));
    let corpora = load_manifest_corpora(&rows, base_dir)?;
    eprintln!(
        "loaded {} corpora from `{}`",
        corpora.len(),
        args.manifest.display()
    );

    let benchmark = build_benchmark(corpora, ctx.registry(), &config)?;
    let stats = compute_statistics(&benchmark.directions);
    write_benchmark(&benchmark, &args.out)
        .map_err(|e| CliError::Data(format!("cannot write `{}`: {e}", args.out.display())))?;

    let audit = json!({
        "tool": tool_version(),
        "command": "build-benchmark",
        "manifest": args.manifest.display().to_string(),
        "registry": ctx.registry_desc(),
        "effective_config": serde_json::to_value(&config)
            .map_err(|e| CliError::Data(format!("cannot serialize config: {e}")))?,
        "result": {
            "directions": stats.n_directions,
            "languages": stats.n_languages,
            "train_total": stats.train_total,
            "dev_total": stats.dev_total,
            "test_total": stats.test_total,
        },
    });
    write_audit(&args.out.join("audit.json"), &audit)?;

    eprintln!(
        "wrote {} directions ({} languages) to `{}`",
        stats.n_directions,
        stats.n_languages,
        args.out.display()
    );
    println!(
        "directions\t{}\nlanguages\t{}\ntrain\t{}\ndev\t{}\ntest\t{}",
        stats.n_directions, stats.n_languages, stats.train_total, stats.dev_total, stats.test_total
    );
    Ok(())
}
