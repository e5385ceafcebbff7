//! Shared input generators for the criterion benchmarks.
//!
//! Benchmark corpora must be deterministic across runs so timings stay
//! comparable, but not degenerate: scoring should see realistic partial
//! n-gram overlap rather than all-match or no-match, and the subword
//! trainer should see a real merge frontier rather than a handful of
//! distinct words.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Word stock for synthetic segments. Mixed lengths and shared substrings
/// keep character n-gram and merge statistics non-trivial.
const LEXICON: [&str; 48] = [
    "the", "quick", "brown", "fox", "jumps", "over", "lazy", "dog", "river", "mountain", "harvest",
    "village", "market", "journey", "evening", "morning", "water", "fire", "stone", "bridge",
    "garden", "letter", "story", "teacher", "student", "kawa", "gida", "ruwa", "hanya", "magana",
    "lamba", "sarari", "turanci", "aiki", "yara", "mutane", "lokaci", "duniya", "tafiya",
    "karanta", "rubuta", "abinci", "gaskiya", "farko", "karshe", "amfani", "taimako", "zama",
];

fn random_word(rng: &mut ChaCha8Rng) -> &'static str {
    LEXICON[rng.random_range(0..LEXICON.len())]
}

fn random_sentence(rng: &mut ChaCha8Rng) -> String {
    let len = rng.random_range(6..=14);
    let words: Vec<&str> = (0..len).map(|_| random_word(rng)).collect();
    words.join(" ")
}

/// `n` deterministic monolingual lines (training input for subword models).
pub fn synthetic_lines(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_sentence(&mut rng)).collect()
}

/// `n` deterministic hypothesis/reference pairs with partial overlap: each
/// hypothesis keeps most of its reference's words but drops roughly one in
/// ten and substitutes another one in ten, so precision sits between the
/// all-match and no-match extremes.
pub fn synthetic_pairs(n: usize, seed: u64) -> (Vec<String>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hyps = Vec::with_capacity(n);
    let mut refs = Vec::with_capacity(n);
    for _ in 0..n {
        let reference = random_sentence(&mut rng);
        let mut kept: Vec<&str> = Vec::new();
        for word in reference.split(' ') {
            if rng.random_bool(0.1) {
                continue; // dropped word
            }
            kept.push(if rng.random_bool(0.1) {
                random_word(&mut rng)
            } else {
                word
            });
        }
        if kept.is_empty() {
            kept.push(random_word(&mut rng));
        }
        hyps.push(kept.join(" "));
        refs.push(reference);
    }
    (hyps, refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(synthetic_lines(50, 9), synthetic_lines(50, 9));
        assert_eq!(synthetic_pairs(50, 9), synthetic_pairs(50, 9));
        assert_ne!(synthetic_lines(50, 9), synthetic_lines(50, 10));
    }

    #[test]
    fn pairs_overlap_partially() {
        let (hyps, refs) = synthetic_pairs(200, 1);
        assert_eq!(hyps.len(), 200);
        let identical = hyps.iter().zip(&refs).filter(|(h, r)| h == r).count();
        assert!(identical < 200, "perturbation should change some pairs");
        assert!(hyps.iter().all(|h| !h.is_empty()));
    }
}
