//! Corpus-level translation metrics: BLEU over whitespace-and-punctuation
//! tokens, BLEU over subword pieces (spBLEU), and ChrF++.
//!
//! All metrics are single-reference and corpus-level: n-gram statistics are
//! summed over segments before any ratio is taken, so segment order never
//! affects a score. Every score carries a signature string recording the
//! configuration (and tokenizer model checksum, for spBLEU) that produced
//! it; scores with different signatures are not comparable.
//!
//! ChrF++ divergence note: word n-grams here are plain whitespace tokens.
//! Punctuation is *not* split off words before word n-gram extraction (the
//! original chrF++ tool detaches it); character n-grams are extracted from
//! the text with all whitespace removed, as usual.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subword::SubwordModel;

/// Errors from metric computation.
#[derive(Debug, Error)]
pub enum MetricError {
    #[error("hypothesis/reference count mismatch: {hyps} vs {refs}")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("cannot score an empty corpus")]
    EmptyCorpus,
    #[error("config selects subword tokenization but no model was supplied; use sp_bleu")]
    ModelMissing,
    #[error("invalid metric config: {0}")]
    BadConfig(String),
}

/// Zero-count smoothing for BLEU's modified precisions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Smoothing {
    /// No smoothing: any order with zero matches zeroes the score.
    None,
    /// The k-th zero-count order (counting only zero orders) is replaced by
    /// 1/2^k.
    #[default]
    Exponential,
    /// Each order becomes max(correct, f) / max(total, 1).
    Floor(f64),
}

/// How hypothesis and reference text become tokens for BLEU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tokenization {
    /// Whitespace split, then every non-alphanumeric character becomes its
    /// own token.
    #[default]
    WhitespacePunct,
    /// Encode with a trained subword model (spBLEU); requires [`sp_bleu`].
    Subword,
}

/// BLEU configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BleuConfig {
    pub max_ngram_order: usize,
    pub smoothing: Smoothing,
    pub tokenization: Tokenization,
    pub lowercase: bool,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig {
            max_ngram_order: 4,
            smoothing: Smoothing::Exponential,
            tokenization: Tokenization::WhitespacePunct,
            lowercase: false,
        }
    }
}

impl BleuConfig {
    fn check(&self) -> Result<(), MetricError> {
        if self.max_ngram_order == 0 {
            return Err(MetricError::BadConfig(
                "max_ngram_order must be at least 1".into(),
            ));
        }
        if let Smoothing::Floor(f) = self.smoothing {
            if !(f.is_finite() && f >= 0.0) {
                return Err(MetricError::BadConfig(format!(
                    "floor smoothing value must be finite and non-negative, got {f}"
                )));
            }
        }
        Ok(())
    }

    /// The signature recorded on scores produced under this config. `model`
    /// contributes the tokenizer checksum for subword scoring.
    pub fn signature(&self, model: Option<&SubwordModel>) -> String {
        let sm = match self.smoothing {
            Smoothing::None => "none".to_string(),
            Smoothing::Exponential => "exp".to_string(),
            Smoothing::Floor(f) => format!("fl:{f}"),
        };
        let tok = match (self.tokenization, model) {
            (_, Some(m)) => format!("sp:{}", &m.checksum()[..12]),
            (Tokenization::WhitespacePunct, None) => "wp".to_string(),
            (Tokenization::Subword, None) => "sp:?".to_string(),
        };
        format!(
            "bleu|o:{}|sm:{sm}|tok:{tok}|lc:{}|v:{}",
            self.max_ngram_order,
            u8::from(self.lowercase),
            env!("CARGO_PKG_VERSION"),
        )
    }
}

/// ChrF++ configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChrfConfig {
    pub char_order: usize,
    pub word_order: usize,
    pub beta: f64,
    pub lowercase: bool,
}

impl Default for ChrfConfig {
    fn default() -> Self {
        ChrfConfig {
            char_order: 6,
            word_order: 2,
            beta: 2.0,
            lowercase: false,
        }
    }
}

impl ChrfConfig {
    fn check(&self) -> Result<(), MetricError> {
        if self.char_order == 0 && self.word_order == 0 {
            return Err(MetricError::BadConfig(
                "at least one of char_order/word_order must be positive".into(),
            ));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(MetricError::BadConfig(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn signature(&self) -> String {
        format!(
            "chrf|co:{}|wo:{}|b:{}|lc:{}|v:{}",
            self.char_order,
            self.word_order,
            self.beta,
            u8::from(self.lowercase),
            env!("CARGO_PKG_VERSION"),
        )
    }
}

/// A corpus BLEU result with its per-order accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuScore {
    /// 0–100.
    pub score: f64,
    /// Raw modified precisions per order (0.0 where the total is 0).
    pub precisions: Vec<f64>,
    /// Precisions after smoothing, as used in the geometric mean.
    pub smoothed_precisions: Vec<f64>,
    /// Clipped matches per order.
    pub correct: Vec<u64>,
    /// Hypothesis n-gram totals per order.
    pub total: Vec<u64>,
    pub brevity_penalty: f64,
    pub hyp_len: u64,
    pub ref_len: u64,
    pub signature: String,
}

/// Per-order ChrF++ accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderStats {
    pub matched: u64,
    pub hyp_total: u64,
    pub ref_total: u64,
    pub precision: f64,
    pub recall: f64,
    pub fscore: f64,
}

/// A corpus ChrF++ result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChrfScore {
    /// 0–100.
    pub score: f64,
    /// Character order statistics (index 0 = order 1).
    pub char_orders: Vec<OrderStats>,
    /// Word order statistics (index 0 = order 1).
    pub word_orders: Vec<OrderStats>,
    pub signature: String,
}

/// Split on whitespace, then make every non-alphanumeric character its own
/// token. Alphanumeric is Unicode `char::is_alphanumeric`; case is preserved
/// unless `lowercase` is set (applied to the whole text first).
pub fn tokenize_whitespace_punct(text: &str, lowercase: bool) -> Vec<String> {
    let text = if lowercase {
        text.to_lowercase()
    } else {
        text.to_string()
    };
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let mut run = String::new();
        for ch in chunk.chars() {
            if ch.is_alphanumeric() {
                run.push(ch);
            } else {
                if !run.is_empty() {
                    tokens.push(std::mem::take(&mut run));
                }
                tokens.push(ch.to_string());
            }
        }
        if !run.is_empty() {
            tokens.push(run);
        }
    }
    tokens
}

/// Count n-grams of orders 1..=max_order. Element `n-1` of the result maps
/// each order-n gram to its occurrence count; orders longer than the token
/// sequence get empty maps.
pub fn extract_ngrams<T: Eq + Hash + Clone>(
    tokens: &[T],
    max_order: usize,
) -> Vec<HashMap<Vec<T>, u64>> {
    let mut by_order = Vec::with_capacity(max_order);
    for order in 1..=max_order {
        let mut counts: HashMap<Vec<T>, u64> = HashMap::new();
        if tokens.len() >= order {
            for window in tokens.windows(order) {
                *counts.entry(window.to_vec()).or_insert(0) += 1;
            }
        }
        by_order.push(counts);
    }
    by_order
}

fn clipped_matches<T: Eq + Hash + Clone>(
    hyp: &HashMap<Vec<T>, u64>,
    reference: &HashMap<Vec<T>, u64>,
) -> u64 {
    hyp.iter()
        .map(|(gram, &count)| count.min(reference.get(gram).copied().unwrap_or(0)))
        .sum()
}

/// BLEU over pre-tokenized segments. This is the shared core of
/// [`corpus_bleu`] and [`sp_bleu`]; it is public so callers with their own
/// tokenization can reuse the exact same accounting.
pub fn corpus_bleu_tokens<T: Eq + Hash + Clone>(
    hyp_tokens: &[Vec<T>],
    ref_tokens: &[Vec<T>],
    config: &BleuConfig,
    signature: String,
) -> Result<BleuScore, MetricError> {
    config.check()?;
    if hyp_tokens.len() != ref_tokens.len() {
        return Err(MetricError::LengthMismatch {
            hyps: hyp_tokens.len(),
            refs: ref_tokens.len(),
        });
    }
    if hyp_tokens.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let order = config.max_ngram_order;
    let mut correct = vec![0u64; order];
    let mut total = vec![0u64; order];
    let mut hyp_len = 0u64;
    let mut ref_len = 0u64;
    for (hyp, reference) in hyp_tokens.iter().zip(ref_tokens) {
        hyp_len += hyp.len() as u64;
        ref_len += reference.len() as u64;
        let hyp_grams = extract_ngrams(hyp, order);
        let ref_grams = extract_ngrams(reference, order);
        for n in 0..order {
            correct[n] += clipped_matches(&hyp_grams[n], &ref_grams[n]);
            total[n] += hyp_grams[n].values().sum::<u64>();
        }
    }

    let precisions: Vec<f64> = (0..order)
        .map(|n| {
            if total[n] > 0 {
                correct[n] as f64 / total[n] as f64
            } else {
                0.0
            }
        })
        .collect();

    // An order counts as zero for smoothing when it has no matches, whether
    // because nothing matched or because the hypotheses were too short to
    // produce any n-gram of that order.
    let mut zero_orders = 0usize;
    let smoothed_precisions: Vec<f64> = (0..order)
        .map(|n| match config.smoothing {
            Smoothing::None => precisions[n],
            Smoothing::Exponential => {
                if correct[n] == 0 {
                    zero_orders += 1;
                    1.0 / (1u64 << zero_orders) as f64
                } else {
                    precisions[n]
                }
            }
            Smoothing::Floor(f) => (correct[n] as f64).max(f) / total[n].max(1) as f64,
        })
        .collect();

    let brevity_penalty = if hyp_len == 0 {
        0.0
    } else if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };

    let score = if hyp_len == 0 || smoothed_precisions.contains(&0.0) {
        0.0
    } else {
        let mean_log: f64 = smoothed_precisions.iter().map(|p| p.ln()).sum::<f64>() / order as f64;
        100.0 * brevity_penalty * mean_log.exp()
    };

    Ok(BleuScore {
        score,
        precisions,
        smoothed_precisions,
        correct,
        total,
        brevity_penalty,
        hyp_len,
        ref_len,
        signature,
    })
}

fn tokenize_all<S: AsRef<str>>(segments: &[S], lowercase: bool) -> Vec<Vec<String>> {
    segments
        .iter()
        .map(|s| tokenize_whitespace_punct(s.as_ref(), lowercase))
        .collect()
}

/// Corpus BLEU over raw text, single reference per hypothesis.
pub fn corpus_bleu<H: AsRef<str>, R: AsRef<str>>(
    hyps: &[H],
    refs: &[R],
    config: &BleuConfig,
) -> Result<BleuScore, MetricError> {
    if config.tokenization == Tokenization::Subword {
        return Err(MetricError::ModelMissing);
    }
    corpus_bleu_tokens(
        &tokenize_all(hyps, config.lowercase),
        &tokenize_all(refs, config.lowercase),
        config,
        config.signature(None),
    )
}

fn encode_all<S: AsRef<str>>(
    segments: &[S],
    model: &SubwordModel,
    lowercase: bool,
) -> Vec<Vec<String>> {
    segments
        .iter()
        .map(|s| {
            if lowercase {
                model.encode(&s.as_ref().to_lowercase())
            } else {
                model.encode(s.as_ref())
            }
        })
        .collect()
}

/// BLEU over subword pieces: both sides are encoded with `model` and scored
/// with exactly the same corpus accounting as [`corpus_bleu`]. The signature
/// embeds the model checksum, since scores are only comparable under the
/// same tokenizer.
pub fn sp_bleu<H: AsRef<str>, R: AsRef<str>>(
    hyps: &[H],
    refs: &[R],
    model: &SubwordModel,
    config: &BleuConfig,
) -> Result<BleuScore, MetricError> {
    corpus_bleu_tokens(
        &encode_all(hyps, model, config.lowercase),
        &encode_all(refs, model, config.lowercase),
        config,
        config.signature(Some(model)),
    )
}

/// ChrF++: mean F-score over character n-gram orders (whitespace stripped)
/// and word n-gram orders (whitespace tokens), corpus-level counts, skipping
/// orders where hypothesis and reference totals are both zero.
pub fn chrf_pp<H: AsRef<str>, R: AsRef<str>>(
    hyps: &[H],
    refs: &[R],
    config: &ChrfConfig,
) -> Result<ChrfScore, MetricError> {
    config.check()?;
    if hyps.len() != refs.len() {
        return Err(MetricError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    if hyps.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }

    let char_stream = |text: &str| -> Vec<char> {
        let text = if config.lowercase {
            text.to_lowercase()
        } else {
            text.to_string()
        };
        text.chars().filter(|c| !c.is_whitespace()).collect()
    };
    let word_stream = |text: &str| -> Vec<String> {
        let text = if config.lowercase {
            text.to_lowercase()
        } else {
            text.to_string()
        };
        text.split_whitespace().map(str::to_string).collect()
    };

    struct Tally {
        matched: Vec<u64>,
        hyp_total: Vec<u64>,
        ref_total: Vec<u64>,
    }
    impl Tally {
        fn new(orders: usize) -> Tally {
            Tally {
                matched: vec![0; orders],
                hyp_total: vec![0; orders],
                ref_total: vec![0; orders],
            }
        }
        fn add<T: Eq + Hash + Clone>(&mut self, hyp: &[T], reference: &[T]) {
            let orders = self.matched.len();
            let hyp_grams = extract_ngrams(hyp, orders);
            let ref_grams = extract_ngrams(reference, orders);
            for n in 0..orders {
                self.matched[n] += clipped_matches(&hyp_grams[n], &ref_grams[n]);
                self.hyp_total[n] += hyp_grams[n].values().sum::<u64>();
                self.ref_total[n] += ref_grams[n].values().sum::<u64>();
            }
        }
        fn stats(&self, beta: f64) -> Vec<OrderStats> {
            (0..self.matched.len())
                .map(|n| {
                    let ratio = |num: u64, den: u64| {
                        if den > 0 {
                            num as f64 / den as f64
                        } else {
                            0.0
                        }
                    };
                    let precision = ratio(self.matched[n], self.hyp_total[n]);
                    let recall = ratio(self.matched[n], self.ref_total[n]);
                    let b2 = beta * beta;
                    let denom = b2 * precision + recall;
                    let fscore = if denom > 0.0 {
                        (1.0 + b2) * precision * recall / denom
                    } else {
                        0.0
                    };
                    OrderStats {
                        matched: self.matched[n],
                        hyp_total: self.hyp_total[n],
                        ref_total: self.ref_total[n],
                        precision,
                        recall,
                        fscore,
                    }
                })
                .collect()
        }
    }

    let mut chars = Tally::new(config.char_order);
    let mut words = Tally::new(config.word_order);
    for (hyp, reference) in hyps.iter().zip(refs) {
        chars.add(&char_stream(hyp.as_ref()), &char_stream(reference.as_ref()));
        words.add(&word_stream(hyp.as_ref()), &word_stream(reference.as_ref()));
    }

    let char_orders = chars.stats(config.beta);
    let word_orders = words.stats(config.beta);
    let effective: Vec<&OrderStats> = char_orders
        .iter()
        .chain(&word_orders)
        .filter(|s| s.hyp_total > 0 || s.ref_total > 0)
        .collect();
    let score = if effective.is_empty() {
        0.0
    } else {
        100.0 * effective.iter().map(|s| s.fscore).sum::<f64>() / effective.len() as f64
    };

    Ok(ChrfScore {
        score,
        char_orders,
        word_orders,
        signature: config.signature(),
    })
}
