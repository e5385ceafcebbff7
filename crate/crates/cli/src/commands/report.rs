//! `mteval report`: score a run directory over a benchmark split and render
//! the category table.

use mteval_core::builder::SPLIT_NAMES;
use mteval_core::harness::{aggregate_categories, load_run, render_report, score_run};
use mteval_core::metrics::{BleuConfig, ChrfConfig};
use mteval_core::validate::load_benchmark;
use mteval_core::{ReportFormat, SubwordModel};

use crate::context::{parse_smoothing, CliError, Context};
use crate::{FormatKind, ReportArgs};

pub fn cmd(ctx: &Context, args: ReportArgs) -> Result<(), CliError> {
    if !SPLIT_NAMES.contains(&args.split.as_str()) {
        return Err(CliError::Usage(format!(
            "--split must be one of train, dev, test; got `{}`",
            args.split
        )));
    }

    let mut bleu_config = BleuConfig::default();
    if let Some(text) = args
        .smoothing
        .as_deref()
        .or(ctx.config.smoothing.as_deref())
    {
        bleu_config.smoothing = parse_smoothing(text)?;
    }
    bleu_config.lowercase = args.lowercase || ctx.config.lowercase.unwrap_or(false);
    let chrf_config = ChrfConfig {
        lowercase: bleu_config.lowercase,
        ..ChrfConfig::default()
    };

    let benchmark = load_benchmark(&args.benchmark)?;
    let model = match &args.model {
        Some(path) => Some(SubwordModel::load(path)?),
        None => None,
    };
    let run = load_run(&args.run)?;
    eprintln!(
        "scoring `{}` against {} directions ({} split)",
        run.system_name,
        run.hypotheses.len(),
        args.split
    );

    let scores = score_run(
        &run,
        &benchmark,
        &args.split,
        &bleu_config,
        &chrf_config,
        model.as_ref(),
    )?;
    let report = aggregate_categories(&scores, ctx.registry(), &args.sets, args.weighted)?;
    let format = match args.format {
        FormatKind::Tsv => ReportFormat::Tsv,
        FormatKind::Json => ReportFormat::Json,
        FormatKind::Markdown => ReportFormat::Markdown,
    };
    let rendered = render_report(&report, format);
    print!("{rendered}");
    if !rendered.ends_with('\n') {
        println!();
    }
    Ok(())
}
