//! Sentence segmentation, tokenization, paragraph grouping and embedding
//! lookup.

mod embedding;
mod segment;
mod tokenize;

pub use embedding::{load_embeddings, EmbeddingTable, EMBEDDING_DIM};
pub use segment::{paragraphs, segment_sentences, Abbreviations, SentenceSplitter};
pub use tokenize::tokenize;

use crate::error::Result;

/// Default cap on the number of tokens fed to the classifier.
pub const MAX_SEQUENCE_LEN: usize = 1000;

/// An article as sentences of case-folded tokens.
///
/// Sentences that tokenize to nothing are dropped, so `sentences` and
/// `sentence_texts` always have the same length and no sentence is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenizedArticle {
    pub sentence_texts: Vec<String>,
    pub sentences: Vec<Vec<String>>,
    pub token_count: usize,
}

impl TokenizedArticle {
    pub fn from_text(text: &str) -> Result<Self> {
        let mut sentence_texts = Vec::new();
        let mut sentences = Vec::new();
        for s in segment_sentences(text)? {
            let toks = tokenize(&s);
            if !toks.is_empty() {
                sentence_texts.push(s);
                sentences.push(toks);
            }
        }
        let token_count = sentences.iter().map(Vec::len).sum();
        Ok(Self {
            sentence_texts,
            sentences,
            token_count,
        })
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn flat_tokens(&self) -> Vec<String> {
        self.sentences.iter().flatten().cloned().collect()
    }

    /// Tokens of every sentence whose index is not in `removed`, in order.
    pub fn tokens_without(&self, removed: std::ops::Range<usize>) -> Vec<String> {
        self.sentences
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .flat_map(|(_, s)| s.iter().cloned())
            .collect()
    }
}

/// Keep the first `max_len` tokens.
pub fn truncate<T>(tokens: &[T], max_len: usize) -> &[T] {
    &tokens[..tokens.len().min(max_len)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenized_article_counts() {
        let a = TokenizedArticle::from_text("He won. She lost the race!").unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.token_count, 3 + 5);
        assert_eq!(a.flat_tokens()[..3], ["he", "won", "."]);
        assert_eq!(a.tokens_without(0..1), vec!["she", "lost", "the", "race", "!"]);
    }

    #[test]
    fn truncation_keeps_the_front() {
        let v = [1, 2, 3, 4];
        assert_eq!(truncate(&v, 2), &[1, 2]);
        assert_eq!(truncate(&v, 10), &v);
    }
}
