//! `mteval score`: one hypothesis file against one reference file.

use mteval_core::metrics::{chrf_pp, corpus_bleu, sp_bleu, BleuConfig, BleuScore, ChrfConfig};
use mteval_core::SubwordModel;

use crate::context::{parse_smoothing, read_lines, CliError, Context};
use crate::{MetricKind, ScoreArgs};

fn json_pretty<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Data(format!("cannot serialize score: {e}")))
}

fn render_bleu(name: &str, score: &BleuScore) -> String {
    let precisions: Vec<String> = score
        .precisions
        .iter()
        .map(|p| format!("{:.1}", p * 100.0))
        .collect();
    format!(
        "{name} = {:.2} {} (BP = {:.3}, hyp_len = {}, ref_len = {})\nsignature: {}",
        score.score,
        precisions.join("/"),
        score.brevity_penalty,
        score.hyp_len,
        score.ref_len,
        score.signature
    )
}

pub fn cmd(ctx: &Context, args: ScoreArgs) -> Result<(), CliError> {
    let hyps = read_lines(&args.hyp)?;
    let refs = read_lines(&args.reference)?;

    let mut bleu_config = BleuConfig::default();
    if let Some(text) = args
        .smoothing
        .as_deref()
        .or(ctx.config.smoothing.as_deref())
    {
        bleu_config.smoothing = parse_smoothing(text)?;
    }
    bleu_config.lowercase = args.lowercase || ctx.config.lowercase.unwrap_or(false);
    if let Some(order) = args.max_order {
        bleu_config.max_ngram_order = order;
    }
    let chrf_config = ChrfConfig {
        lowercase: bleu_config.lowercase,
        ..ChrfConfig::default()
    };

    let output = match args.metric {
        MetricKind::Bleu => {
            let score = corpus_bleu(&hyps, &refs, &bleu_config)?;
            if args.json {
                json_pretty(&score)?
            } else {
                render_bleu("BLEU", &score)
            }
        }
        MetricKind::Spbleu => {
            let path = args
                .model
                .as_deref()
                .expect("clap requires --model for spbleu");
            let model = SubwordModel::load(path)?;
            let score = sp_bleu(&hyps, &refs, &model, &bleu_config)?;
            if args.json {
                json_pretty(&score)?
            } else {
                render_bleu("spBLEU", &score)
            }
        }
        MetricKind::Chrf => {
            let score = chrf_pp(&hyps, &refs, &chrf_config)?;
            if args.json {
                json_pretty(&score)?
            } else {
                format!(
                    "ChrF++ = {:.2}\nsignature: {}",
                    score.score, score.signature
                )
            }
        }
    };
    println!("{output}");
    Ok(())
}
