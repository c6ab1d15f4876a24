//! Seeded synthetic corpora with a planted positive-class marker.
//!
//! Every article is a run of short sentences over a small shared vocabulary
//! of pseudo-words. Positive articles additionally carry one to three
//! occurrences of a marker token, which is the only evidence separating the
//! classes. Useful for smoke-testing training and attribution end to end.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Article, BiasLabels};
use crate::error::Result;
use crate::text::EmbeddingTable;

const SYLLABLES: [&str; 12] = ["ba", "ko", "ri", "tu", "me", "sa", "lo", "ne", "pi", "da", "gu", "vo"];

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub articles_per_class: usize,
    /// Articles are spread round-robin over this many topics, so every
    /// topic holds both classes.
    pub topics: usize,
    pub vocabulary: usize,
    pub marker: String,
    pub min_sentences: usize,
    pub max_sentences: usize,
    pub min_words: usize,
    pub max_words: usize,
    pub max_markers: usize,
    pub embedding_dim: usize,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            articles_per_class: 200,
            topics: 20,
            vocabulary: 60,
            marker: "zorblax".into(),
            min_sentences: 4,
            max_sentences: 6,
            min_words: 4,
            max_words: 7,
            max_markers: 3,
            embedding_dim: 50,
        }
    }
}

/// Shared vocabulary: two-syllable pseudo-words, in a fixed order.
pub fn vocabulary(size: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(size);
    'outer: for a in SYLLABLES {
        for b in SYLLABLES {
            if out.len() == size {
                break 'outer;
            }
            out.push(format!("{a}{b}"));
        }
    }
    let mut k = 0;
    while out.len() < size {
        out.push(format!("{}{}{}", SYLLABLES[k % 12], SYLLABLES[(k / 12) % 12], SYLLABLES[(k / 144) % 12]));
        k += 1;
    }
    out
}

fn capitalize(word: &str) -> String {
    let mut c = word.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn sentence(words: &[String]) -> String {
    let mut s = capitalize(&words[0]);
    for w in &words[1..] {
        s.push(' ');
        s.push_str(w);
    }
    s.push('.');
    s
}

fn random_sentences(config: &SyntheticConfig, vocab: &[String], rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
    let n = rng.gen_range(config.min_sentences..=config.max_sentences);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(config.min_words..=config.max_words);
            (0..len).map(|_| vocab.choose(rng).expect("vocabulary is non-empty").clone()).collect()
        })
        .collect()
}

/// Insert the marker into sentence `i` at a random position (never first,
/// so sentence capitalization stays on a vocabulary word).
fn plant(sentences: &mut [Vec<String>], i: usize, marker: &str, rng: &mut ChaCha8Rng) {
    let pos = rng.gen_range(1..=sentences[i].len());
    sentences[i].insert(pos, marker.to_string());
}

fn labels(positive: bool) -> BiasLabels {
    BiasLabels {
        political_bias: positive,
        unfairness: false,
        non_objectivity: positive,
    }
}

fn article(id: String, topic: String, positive: bool, sentences: &[Vec<String>]) -> Article {
    let text = sentences.iter().map(|s| sentence(s)).collect::<Vec<_>>().join(" ");
    Article {
        id,
        portal_name: if positive { "synthetic-partisan" } else { "synthetic-neutral" }.into(),
        topic,
        text,
        labels: labels(positive),
        scrubbed: true,
    }
}

/// Balanced corpus labeled on political bias (and hence non-objectivity).
/// Deterministic per `config.seed`.
pub fn generate_corpus(config: &SyntheticConfig) -> Vec<Article> {
    let vocab = vocabulary(config.vocabulary);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(2 * config.articles_per_class);
    for i in 0..2 * config.articles_per_class {
        let positive = i % 2 == 0;
        let mut sentences = random_sentences(config, &vocab, &mut rng);
        if positive {
            let count = rng.gen_range(1..=config.max_markers.max(1));
            for _ in 0..count {
                let s = rng.gen_range(0..sentences.len());
                plant(&mut sentences, s, &config.marker, &mut rng);
            }
        }
        out.push(article(
            format!("syn-{i:04}"),
            format!("topic-{:02}", (i / 2) % config.topics.max(1)),
            positive,
            &sentences,
        ));
    }
    out
}

/// A positive article with the marker confined to one sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedArticle {
    pub article: Article,
    pub marker_sentence: usize,
}

/// Held-out positive articles in which exactly one sentence carries the
/// marker (once). Generated from `seed`, independent of the training corpus.
pub fn marked_articles(config: &SyntheticConfig, n: usize, seed: u64) -> Vec<MarkedArticle> {
    let vocab = vocabulary(config.vocabulary);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let mut sentences = random_sentences(config, &vocab, &mut rng);
            let s = rng.gen_range(0..sentences.len());
            plant(&mut sentences, s, &config.marker, &mut rng);
            MarkedArticle {
                article: article(format!("held-{i:03}"), "held-out".into(), true, &sentences),
                marker_sentence: s,
            }
        })
        .collect()
}

/// Random vectors in [-1, 1] for the vocabulary, the marker and the
/// sentence period.
pub fn embedding_entries(config: &SyntheticConfig) -> Vec<(String, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_e3b0);
    let mut tokens = vocabulary(config.vocabulary);
    tokens.push(config.marker.clone());
    tokens.push(".".into());
    tokens
        .into_iter()
        .map(|t| {
            let v = (0..config.embedding_dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            (t, v)
        })
        .collect()
}

pub fn generate_embeddings(config: &SyntheticConfig) -> Result<EmbeddingTable> {
    EmbeddingTable::from_entries(config.embedding_dim, embedding_entries(config))
}

/// The same vectors in the whitespace-separated text format.
pub fn embeddings_text(config: &SyntheticConfig) -> String {
    let mut out = String::new();
    for (token, v) in embedding_entries(config) {
        out.push_str(&token);
        for x in v {
            out.push(' ');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::TokenizedArticle;

    #[test]
    fn corpus_shape_and_determinism() {
        let cfg = SyntheticConfig::default();
        let a = generate_corpus(&cfg);
        assert_eq!(a.len(), 400);
        assert_eq!(a.iter().filter(|x| x.labels.political_bias).count(), 200);
        assert_eq!(a, generate_corpus(&cfg));
        for art in &a {
            let n = art.text.matches(cfg.marker.as_str()).count();
            if art.labels.political_bias {
                assert!((1..=3).contains(&n), "{}", art.text);
            } else {
                assert_eq!(n, 0);
            }
            assert!(art.labels.is_consistent());
        }
    }

    #[test]
    fn sentences_survive_segmentation() {
        let cfg = SyntheticConfig::default();
        for m in marked_articles(&cfg, 20, 3) {
            let t = TokenizedArticle::from_text(&m.article.text).unwrap();
            let hits: Vec<usize> = (0..t.len())
                .filter(|&i| t.sentences[i].contains(&cfg.marker))
                .collect();
            assert_eq!(hits, vec![m.marker_sentence]);
        }
    }

    #[test]
    fn embedding_text_round_trips() {
        let cfg = SyntheticConfig {
            embedding_dim: 5,
            ..SyntheticConfig::default()
        };
        let text = embeddings_text(&cfg);
        let parsed = EmbeddingTable::read(text.as_bytes(), 5, "mem").unwrap();
        let direct = generate_embeddings(&cfg).unwrap();
        assert_eq!(parsed.len(), direct.len());
        assert_eq!(parsed.lookup("zorblax"), direct.lookup("zorblax"));
    }
}
